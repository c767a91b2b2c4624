#include "chyp/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <thread>

namespace chyp {

namespace {

// Insert-only open-addressing map from 64-bit hashes to chain heads.
class FlatMap {
public:
    explicit FlatMap(std::size_t expected) {
        std::size_t cap = 64;
        while (cap < expected * 2) cap <<= 1;
        keys_.assign(cap, 0);
        vals_.assign(cap, kEmpty);
        mask_ = cap - 1;
    }

    static constexpr std::uint32_t kEmpty = 0xffffffffu;

    std::uint32_t find(std::uint64_t key) const {
        std::size_t slot = key & mask_;
        while (vals_[slot] != kEmpty) {
            if (keys_[slot] == key) return vals_[slot];
            slot = (slot + 1) & mask_;
        }
        return kEmpty;
    }

    // Sets head for key (key may already exist; head is overwritten).
    void set(std::uint64_t key, std::uint32_t head) {
        if ((count_ + 1) * 5 > (mask_ + 1) * 3) grow();
        std::size_t slot = key & mask_;
        while (vals_[slot] != kEmpty) {
            if (keys_[slot] == key) {
                vals_[slot] = head;
                return;
            }
            slot = (slot + 1) & mask_;
        }
        keys_[slot] = key;
        vals_[slot] = head;
        ++count_;
    }

private:
    void grow() {
        std::vector<std::uint64_t> old_keys = std::move(keys_);
        std::vector<std::uint32_t> old_vals = std::move(vals_);
        const std::size_t cap = (mask_ + 1) * 2;
        keys_.assign(cap, 0);
        vals_.assign(cap, kEmpty);
        mask_ = cap - 1;
        count_ = 0;
        for (std::size_t i = 0; i < old_vals.size(); ++i)
            if (old_vals[i] != kEmpty) set(old_keys[i], old_vals[i]);
    }

    std::vector<std::uint64_t> keys_;
    std::vector<std::uint32_t> vals_;
    std::size_t mask_ = 0;
    std::size_t count_ = 0;
};

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_cells(const std::int64_t* cells, int count) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (int i = 0; i < count; ++i)
        h = mix64(h ^ static_cast<std::uint64_t>(cells[i]) * 0x9e3779b97f4a7c15ULL);
    return h;
}

constexpr std::size_t kBlockElems = 4096;
constexpr int kMaxProbeVariants = 8;

// Matrix pool with stable addresses (no reallocation spikes).
class MatrixPool {
public:
    explicit MatrixPool(int entries_per_elem) : stride_(entries_per_elem) {}

    Complex* append(const Complex* data) {
        const std::size_t block = count_ / kBlockElems;
        if (block == blocks_.size())
            blocks_.push_back(std::make_unique<Complex[]>(kBlockElems * stride_));
        Complex* dst = blocks_[block].get() + (count_ % kBlockElems) * stride_;
        std::memcpy(dst, data, sizeof(Complex) * stride_);
        ++count_;
        return dst;
    }

    const Complex* at(std::size_t i) const {
        return blocks_[i / kBlockElems].get() + (i % kBlockElems) * stride_;
    }

    std::size_t size() const { return count_; }

private:
    int stride_;
    std::size_t count_ = 0;
    std::vector<std::unique_ptr<Complex[]>> blocks_;
};

struct Candidate {
    std::uint32_t parent;
    std::uint8_t letter;
    double displacement;
    double scale;
    std::uint64_t hash[kMaxProbeVariants];
    int hash_count;
};

} // namespace

struct OrbitSet::Storage {
    int n = 0;                      // ambient dimension
    int stride = 0;                 // (n+1)^2
    std::string group_name;
    std::vector<std::string> letter_labels;
    MatrixPool pool{0};
    std::vector<double> disp;       // BFS order
    std::vector<std::uint32_t> parent;
    std::vector<std::uint8_t> letter;
    std::vector<std::uint16_t> word_len;
    int max_word_len = 0;
    double dedup_tolerance = 0.0;

    std::vector<int> letters_of(std::uint32_t idx) const {
        std::vector<int> out(word_len[idx]);
        std::uint32_t cur = idx;
        for (std::size_t k = out.size(); k-- > 0;) {
            out[k] = letter[cur];
            cur = parent[cur];
        }
        return out;
    }
};

namespace {

// Canonical dedup key of a matrix: scale by the largest entry modulus, then
// quantize entry moduli (a phase-invariant fingerprint) on a grid of
// tolerance/10. Components within the probe margin of a cell boundary
// contribute alternative keys so that roundoff straddle cannot split a
// duplicate across cells.
void canonical_hashes(const Complex* m, int stride, double grid, Candidate& cand) {
    double scale = 0.0;
    for (int i = 0; i < stride; ++i) scale = std::max(scale, std::abs(m[i]));
    cand.scale = scale;

    std::int64_t cells[64];
    int wobble_idx[8];
    std::int64_t wobble_alt[8];
    int wobble_count = 0;
    const double probe_margin = 1e-3;  // in grid units; >> roundoff scatter
    for (int i = 0; i < stride; ++i) {
        const double v = std::abs(m[i]) / (scale * grid);
        const double r = std::round(v);
        cells[i] = static_cast<std::int64_t>(r);
        const double frac = v - r;  // in [-0.5, 0.5]
        if (wobble_count < 8 && std::abs(std::abs(frac) - 0.5) < probe_margin) {
            wobble_idx[wobble_count] = i;
            wobble_alt[wobble_count] = cells[i] + (frac > 0 ? 1 : -1);
            ++wobble_count;
        }
    }

    // Cap the probe combinatorics; 3 boundary-close components cover
    // everything seen in practice.
    if (wobble_count > 3) wobble_count = 3;
    const int variants = 1 << wobble_count;
    cand.hash_count = std::min(variants, kMaxProbeVariants);
    for (int mask = 0; mask < cand.hash_count; ++mask) {
        std::int64_t saved[8];
        for (int b = 0; b < wobble_count; ++b)
            if (mask & (1 << b)) {
                saved[b] = cells[wobble_idx[b]];
                cells[wobble_idx[b]] = wobble_alt[b];
            }
        cand.hash[mask] = hash_cells(cells, stride);
        for (int b = 0; b < wobble_count; ++b)
            if (mask & (1 << b)) cells[wobble_idx[b]] = saved[b];
    }
}

double displacement_of(const Complex* m, int n1) {
    // cosh^2 d = |m00|^2 / (-q(col 0)).
    double q = -std::norm(m[0]);
    for (int k = 1; k < n1; ++k) q += std::norm(m[k]);
    const double c2 = std::norm(m[0]) / (-q);
    if (!(c2 >= 1.0)) return 0.0;
    return std::acosh(std::sqrt(c2));
}

// gap(M1, lambda* M2) with the phase-optimal lambda; see projective_gap.
double gap_raw(const Complex* a, const Complex* b, int stride) {
    Complex s = 0.0;
    for (int i = 0; i < stride; ++i) s += std::conj(b[i]) * a[i];
    const double mag = std::abs(s);
    if (mag == 0.0) return std::numeric_limits<double>::infinity();
    const Complex phase = s / mag;
    double worst = 0.0;
    for (int i = 0; i < stride; ++i) worst = std::max(worst, std::abs(a[i] - phase * b[i]));
    return worst;
}

struct SymmetrizedGens {
    std::vector<CMatrix> mats;
    std::vector<int> inverse_letter;
    std::vector<std::string> labels;
    double max_displacement = 0.0;
};

SymmetrizedGens symmetrize(const GroupSpec& spec) {
    SymmetrizedGens out;
    auto find_equal = [&](const CMatrix& m) -> int {
        for (std::size_t i = 0; i < out.mats.size(); ++i) {
            const double scale = out.mats[i].cwiseAbs().maxCoeff();
            if (projective_gap(m, out.mats[i]) <= 1e-9 * scale) return static_cast<int>(i);
        }
        return -1;
    };
    const auto& gens = spec.generators();
    for (std::size_t k = 0; k < gens.size(); ++k) {
        if (find_equal(gens[k].matrix()) >= 0) continue;
        out.mats.push_back(gens[k].matrix());
        char c = (out.labels.size() < 26) ? static_cast<char>('a' + out.labels.size()) : '?';
        out.labels.push_back(c == '?' ? "g" + std::to_string(out.labels.size()) : std::string(1, c));
    }
    const std::size_t base = out.mats.size();
    out.inverse_letter.assign(base, -1);
    for (std::size_t k = 0; k < base; ++k) {
        CMatrix inv = IsometryElement(out.mats[k]).inverse().matrix();
        int at = find_equal(inv);
        if (at >= 0) {
            out.inverse_letter[k] = at;
        } else {
            out.mats.push_back(std::move(inv));
            out.inverse_letter.push_back(static_cast<int>(k));
            out.inverse_letter[k] = static_cast<int>(out.mats.size() - 1);
            std::string lab = out.labels[k];
            if (lab.size() == 1 && lab[0] >= 'a' && lab[0] <= 'z')
                lab[0] = static_cast<char>(lab[0] - 'a' + 'A');
            else
                lab = lab + "'";
            out.labels.push_back(lab);
        }
    }
    for (const auto& m : out.mats)
        out.max_displacement = std::max(out.max_displacement, displacement(IsometryElement(m)));
    return out;
}

} // namespace

OrbitSet::OrbitSet(std::shared_ptr<const Storage> storage, std::vector<std::uint32_t> selection,
                   double complete_radius, bool capped)
    : storage_(std::move(storage)),
      selection_(std::move(selection)),
      complete_radius_(complete_radius),
      capped_(capped) {}

int OrbitSet::dim() const { return storage_->n; }
const std::string& OrbitSet::group_name() const { return storage_->group_name; }

double OrbitSet::displacement(std::size_t i) const { return storage_->disp[selection_[i]]; }

Eigen::Map<const CMatrix> OrbitSet::matrix(std::size_t i) const {
    const int n1 = storage_->n + 1;
    return Eigen::Map<const CMatrix>(storage_->pool.at(selection_[i]), n1, n1);
}

BallPoint OrbitSet::image(std::size_t i) const {
    const int n1 = storage_->n + 1;
    const Complex* m = storage_->pool.at(selection_[i]);
    CVector coords(storage_->n);
    for (int k = 1; k < n1; ++k) coords(k - 1) = m[k] / m[0];
    return BallPoint(std::move(coords));
}

std::vector<int> OrbitSet::word_letters(std::size_t i) const {
    return storage_->letters_of(selection_[i]);
}

std::string OrbitSet::word_string(std::size_t i) const {
    std::string out;
    for (int letter : word_letters(i)) out += storage_->letter_labels[letter];
    return out;
}

std::size_t OrbitSet::word_length(std::size_t i) const {
    return storage_->word_len[selection_[i]];
}

OrbitElement OrbitSet::element(std::size_t i) const {
    return OrbitElement{word_string(i), IsometryElement(matrix(i)), image(i), displacement(i)};
}

const std::vector<std::string>& OrbitSet::letter_labels() const {
    return storage_->letter_labels;
}

double OrbitSet::complete_radius() const { return complete_radius_; }

double OrbitSet::max_displacement() const {
    return selection_.empty() ? 0.0 : storage_->disp[selection_.back()];
}

int OrbitSet::max_word_len() const { return storage_->max_word_len; }
double OrbitSet::dedup_tolerance() const { return storage_->dedup_tolerance; }
bool OrbitSet::capped() const { return capped_; }

OrbitSet OrbitSet::filtered(const CongruencePredicate& pred) const {
    std::vector<std::uint32_t> keep;
    const int n1 = storage_->n + 1;
    for (std::size_t i = 0; i < selection_.size(); ++i) {
        const std::uint32_t idx = selection_[i];
        if (storage_->word_len[idx] == 0 ||
            pred.matches(Eigen::Map<const CMatrix>(storage_->pool.at(idx), n1, n1)))
            keep.push_back(idx);
    }
    return OrbitSet(storage_, std::move(keep), complete_radius_, capped_);
}

void OrbitSet::write_csv(std::ostream& os) const {
    os << "word,displacement";
    for (int k = 1; k <= storage_->n; ++k) os << ",re_z" << k << ",im_z" << k;
    os << "\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (std::size_t i = 0; i < size(); ++i) {
        const std::string w = word_string(i);
        os << (w.empty() ? "e" : w) << ',';
        put(displacement(i));
        const BallPoint b = image(i);
        for (int k = 0; k < storage_->n; ++k) {
            os << ',';
            put(b.coords()(k).real());
            os << ',';
            put(b.coords()(k).imag());
        }
        os << "\n";
    }
}

OrbitSet enumerate_orbit(const GroupSpec& spec, const OrbitConfig& config) {
    if (config.max_word_len < 1)
        throw std::invalid_argument("enumerate_orbit: max_word_len must be >= 1");
    if (!(config.max_radius > 0.0))
        throw std::invalid_argument("enumerate_orbit: max_radius must be positive");
    if (!(config.dedup_tolerance > 0.0))
        throw std::invalid_argument("enumerate_orbit: dedup_tolerance must be positive");

    const int n = spec.dim();
    const int n1 = n + 1;
    const int stride = n1 * n1;
    const double grid = config.dedup_tolerance / 10.0;
    const double keep_radius = config.max_radius + config.prune_margin;
    const int workers = std::max(1, config.workers);

    SymmetrizedGens gens = symmetrize(spec);
    const int n_letters = static_cast<int>(gens.mats.size());

    auto storage = std::make_shared<OrbitSet::Storage>();
    storage->n = n;
    storage->stride = stride;
    storage->group_name = spec.name();
    storage->letter_labels = gens.labels;
    storage->pool = MatrixPool(stride);
    storage->max_word_len = config.max_word_len;
    storage->dedup_tolerance = config.dedup_tolerance;

    FlatMap table(std::min<std::size_t>(config.element_cap * 2, 1u << 22));
    std::vector<std::uint32_t> chain_next;

    // Chain walk: compare against every stored element whose canonical cell
    // hash matches; phase-aligned max-entry distance within tolerance means
    // the same projective element.
    auto find_duplicate = [&](const Candidate& cand, const Complex* m) -> bool {
        for (int h = 0; h < cand.hash_count; ++h) {
            std::uint32_t at = table.find(cand.hash[h]);
            while (at != FlatMap::kEmpty) {
                if (gap_raw(m, storage->pool.at(at), stride) <=
                    config.dedup_tolerance * cand.scale)
                    return true;
                at = chain_next[at];
            }
        }
        return false;
    };

    auto insert_element = [&](const Complex* m, const Candidate& cand, std::uint32_t parent,
                              std::uint8_t letter, std::uint16_t wl) -> std::uint32_t {
        storage->pool.append(m);
        storage->disp.push_back(cand.displacement);
        storage->parent.push_back(parent);
        storage->letter.push_back(letter);
        storage->word_len.push_back(wl);
        const std::uint32_t idx = static_cast<std::uint32_t>(storage->disp.size() - 1);
        chain_next.push_back(table.find(cand.hash[0]));
        table.set(cand.hash[0], idx);
        return idx;
    };

    // Seed the identity.
    {
        CMatrix id = CMatrix::Identity(n1, n1);
        Candidate cand;
        canonical_hashes(id.data(), stride, grid, cand);
        cand.displacement = 0.0;
        insert_element(id.data(), cand, 0, 0, 0);
    }

    std::vector<std::uint32_t> frontier = {0};
    std::size_t result_count = 1;
    bool capped = false;
    bool stopped_by_len = false;
    double min_disp_last_two[2] = {0.0, 0.0};  // per-layer minima, rolling
    double min_disp_final_layer = std::numeric_limits<double>::infinity();

    std::vector<Complex> cand_matrices;
    std::vector<Candidate> cand_meta;

    for (int layer = 1; layer <= config.max_word_len && !frontier.empty(); ++layer) {
        const std::size_t batch = frontier.size();
        cand_matrices.resize(batch * n_letters * stride);
        cand_meta.resize(batch * n_letters);

        auto expand_range = [&](std::size_t lo, std::size_t hi) {
            Eigen::Map<CMatrix> child(nullptr, n1, n1);
            for (std::size_t f = lo; f < hi; ++f) {
                const std::uint32_t parent_idx = frontier[f];
                const int last = storage->word_len[parent_idx] == 0
                                     ? -1
                                     : storage->letter[parent_idx];
                Eigen::Map<const CMatrix> pm(storage->pool.at(parent_idx), n1, n1);
                for (int letter = 0; letter < n_letters; ++letter) {
                    const std::size_t slot = f * n_letters + letter;
                    Candidate& cand = cand_meta[slot];
                    if (last >= 0 && gens.inverse_letter[last] == letter) {
                        cand.hash_count = 0;  // unused slot
                        continue;
                    }
                    new (&child) Eigen::Map<CMatrix>(cand_matrices.data() + slot * stride, n1, n1);
                    child.noalias() = pm * gens.mats[letter];
                    cand.displacement = displacement_of(child.data(), n1);
                    if (cand.displacement > keep_radius) {
                        cand.hash_count = 0;
                        continue;
                    }
                    canonical_hashes(child.data(), stride, grid, cand);
                    cand.parent = parent_idx;
                    cand.letter = static_cast<std::uint8_t>(letter);
                }
            }
        };

        if (workers == 1 || batch < 64) {
            expand_range(0, batch);
        } else {
            std::vector<std::thread> pool_threads;
            const std::size_t chunk = (batch + workers - 1) / workers;
            for (int w = 0; w < workers; ++w) {
                const std::size_t lo = std::min(batch, w * chunk);
                const std::size_t hi = std::min(batch, lo + chunk);
                if (lo < hi) pool_threads.emplace_back(expand_range, lo, hi);
            }
            for (auto& t : pool_threads) t.join();
        }

        // Deterministic serial merge in (frontier position, letter) order.
        std::vector<std::uint32_t> next_frontier;
        double layer_min = std::numeric_limits<double>::infinity();
        for (std::size_t slot = 0; slot < cand_meta.size() && !capped; ++slot) {
            const Candidate& cand = cand_meta[slot];
            if (cand.hash_count <= 0) continue;
            const Complex* m = cand_matrices.data() + slot * stride;
            if (find_duplicate(cand, m)) continue;
            const bool in_result = cand.displacement <= config.max_radius + 1e-9;
            if (in_result && result_count >= config.element_cap) {
                capped = true;
                break;
            }
            const std::uint32_t idx = insert_element(m, cand, cand.parent, cand.letter,
                                                     static_cast<std::uint16_t>(layer));
            if (in_result) ++result_count;
            layer_min = std::min(layer_min, cand.displacement);
            next_frontier.push_back(idx);
        }

        min_disp_last_two[0] = min_disp_last_two[1];
        min_disp_last_two[1] = layer_min;
        if (capped) break;
        frontier = std::move(next_frontier);
        if (layer == config.max_word_len && !frontier.empty()) {
            stopped_by_len = true;
            min_disp_final_layer = layer_min;
        }
    }

    // Result selection, sorted by (displacement, word length, word lex).
    std::vector<std::uint32_t> selection;
    selection.reserve(result_count);
    for (std::uint32_t i = 0; i < storage->disp.size(); ++i)
        if (storage->disp[i] <= config.max_radius + 1e-9) selection.push_back(i);
    const OrbitSet::Storage* st = storage.get();
    std::sort(selection.begin(), selection.end(), [st](std::uint32_t a, std::uint32_t b) {
        if (st->disp[a] != st->disp[b]) return st->disp[a] < st->disp[b];
        if (st->word_len[a] != st->word_len[b]) return st->word_len[a] < st->word_len[b];
        if (a == b) return false;
        return st->letters_of(a) < st->letters_of(b);
    });

    double max_disp = selection.empty() ? 0.0 : storage->disp[selection.back()];
    double complete;
    if (capped) {
        const double near = std::min(min_disp_last_two[0], min_disp_last_two[1]);
        complete = std::max(0.0, std::min(near, max_disp) - gens.max_displacement);
    } else if (stopped_by_len) {
        complete = std::min({config.max_radius, max_disp,
                             std::nextafter(min_disp_final_layer, 0.0)});
    } else {
        // Frontier exhausted: every word either ended in the ball or left it
        // beyond the prune margin.
        complete = std::isinf(config.max_radius) ? max_disp
                                                 : std::min(config.max_radius, max_disp);
    }

    return OrbitSet(std::move(storage), std::move(selection), complete, capped);
}

OrbitCount orbital_counting(const OrbitSet& orbit, double radius) {
    const double limit = radius + 1e-12 * std::max(1.0, std::abs(radius));
    std::size_t lo = 0, hi = orbit.size();
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (orbit.displacement(mid) <= limit)
            lo = mid + 1;
        else
            hi = mid;
    }
    return OrbitCount{lo, radius <= orbit.complete_radius()};
}

double min_displacement(const OrbitSet& orbit, const CongruencePredicate* pred) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        if (orbit.word_length(i) == 0) continue;  // identity
        if (pred && !pred->matches(orbit.matrix(i))) continue;
        best = orbit.displacement(i);
        break;  // sorted ascending
    }
    return best;
}

} // namespace chyp
