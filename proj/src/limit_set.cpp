#include "chyp/limit_set.hpp"

#include <cmath>
#include <cstdio>

#include "chyp/rng.hpp"

namespace chyp {

namespace {

double metric_distance(const CVector& a, const CVector& b, BoundaryMetric metric) {
    if (metric == BoundaryMetric::euclidean) return (a - b).norm();
    Complex ip = 0.0;
    for (Eigen::Index k = 0; k < a.size(); ++k) ip += a(k) * std::conj(b(k));
    return std::sqrt(std::abs(1.0 - ip));
}

} // namespace

LimitSample sample_limit_set(const GroupSpec& spec, int word_len, int count,
                             std::uint64_t seed) {
    if (word_len < 1) throw std::invalid_argument("sample_limit_set: word_len must be >= 1");
    if (count < 1) throw std::invalid_argument("sample_limit_set: count must be >= 1");

    const std::vector<IsometryElement> gens = spec.symmetrized_generators();
    const int n_letters = static_cast<int>(gens.size());
    std::vector<int> inverse(n_letters, -1);
    for (int i = 0; i < n_letters; ++i) {
        const CMatrix inv = gens[i].inverse().matrix();
        for (int j = 0; j < n_letters; ++j) {
            const double scale = gens[j].matrix().cwiseAbs().maxCoeff();
            if (projective_gap(inv, gens[j].matrix()) <= 1e-9 * scale) {
                inverse[i] = j;
                break;
            }
        }
    }

    if (n_letters < 2)
        throw std::invalid_argument("sample_limit_set: group too small for boundary sampling");

    const int n = spec.dim();
    const int n1 = n + 1;
    LimitSample sample;
    sample.word_len = word_len;
    sample.seed = seed;
    sample.points.reserve(count);

    for (int idx = 0; idx < count; ++idx) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(idx)));
        for (int attempt = 0; attempt < 64; ++attempt) {
            // Uniform reduced word, then gamma . 0 by right-to-left vector
            // application (only column 0 of the product matters).
            std::vector<int> word(word_len);
            word[0] = static_cast<int>(rng.below(n_letters));
            for (int k = 1; k < word_len; ++k) {
                int pick = static_cast<int>(rng.below(n_letters - 1));
                if (pick >= inverse[word[k - 1]] && inverse[word[k - 1]] >= 0) ++pick;
                word[k] = pick;
            }
            CVector v = CVector::Zero(n1);
            v(0) = 1.0;
            for (int k = word_len - 1; k >= 0; --k) v = gens[word[k]].matrix() * v;

            CVector z(n);
            for (int k = 1; k < n1; ++k) z(k - 1) = v(k) / v(0);
            const double r = z.norm();
            if (r < 1e-9) continue;  // elliptic word fixing the origin; redraw
            sample.worst_boundary_gap = std::max(sample.worst_boundary_gap, 1.0 - r);
            sample.points.emplace_back(CVector(z / r));
            break;
        }
    }
    if (sample.points.size() != static_cast<std::size_t>(count))
        throw std::runtime_error("sample_limit_set: persistent elliptic words, group too small");
    sample.near_boundary = sample.worst_boundary_gap <= 1e-6;
    return sample;
}

std::vector<double> geometric_scales(double hi, double lo, int n) {
    if (!(hi > lo) || !(lo > 0.0) || n < 2)
        throw std::invalid_argument("geometric_scales: need hi > lo > 0 and n >= 2");
    std::vector<double> scales(n);
    const double ratio = std::pow(lo / hi, 1.0 / (n - 1));
    double s = hi;
    for (int i = 0; i < n; ++i) {
        scales[i] = s;
        s *= ratio;
    }
    return scales;
}

DimensionEstimate box_dimension(const LimitSample& sample, const std::vector<double>& scales,
                                BoundaryMetric metric) {
    if (sample.points.size() < 500)
        throw std::invalid_argument("box_dimension: need at least 500 sample points");
    if (scales.size() < 4)
        throw std::invalid_argument("box_dimension: need at least 4 scales");
    for (std::size_t i = 0; i + 1 < scales.size(); ++i)
        if (!(scales[i] > scales[i + 1]))
            throw std::invalid_argument("box_dimension: scales must strictly decrease");
    if (std::log10(scales.front() / scales.back()) < 1.5 - 1e-9)
        throw std::invalid_argument("box_dimension: scales must span >= 1.5 decades");

    DimensionEstimate est;
    est.scales = scales;

    // Degeneracy probe: distinct points at clustering tolerance 1e-6.
    {
        std::vector<const CVector*> net;
        const std::size_t probe_limit = std::min<std::size_t>(sample.points.size(), 1000);
        for (std::size_t i = 0; i < probe_limit && net.size() <= 2; ++i) {
            const CVector& p = sample.points[i].coords();
            bool covered = false;
            for (const CVector* c : net)
                if (metric_distance(p, *c, metric) <= 1e-6) {
                    covered = true;
                    break;
                }
            if (!covered) net.push_back(&p);
        }
        if (net.size() <= 2) {
            est.degenerate = true;
            est.dim_hat = 0.0;
            est.counts.assign(scales.size(), net.size());
            est.fit_r2 = 1.0;
            return est;
        }
    }

    // Greedy net covering: walk points in order, open a new ball at every
    // uncovered point. Within a constant factor of the optimal covering
    // count, which the log-log slope does not see.
    est.counts.reserve(scales.size());
    for (double r : scales) {
        std::vector<const CVector*> centers;
        for (const BoundaryPoint& bp : sample.points) {
            const CVector& p = bp.coords();
            bool covered = false;
            for (const CVector* c : centers)
                if (metric_distance(p, *c, metric) <= r) {
                    covered = true;
                    break;
                }
            if (!covered) centers.push_back(&p);
        }
        est.counts.push_back(centers.size());
    }

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const int m = static_cast<int>(scales.size());
    for (int i = 0; i < m; ++i) {
        const double x = std::log(scales[i]);
        const double y = std::log(static_cast<double>(est.counts[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double cov = m * sxy - sx * sy;
    const double var_x = m * sxx - sx * sx;
    const double var_y = m * syy - sy * sy;
    est.dim_hat = -cov / var_x;
    est.fit_r2 = (var_y > 0) ? (cov * cov) / (var_x * var_y) : 1.0;
    return est;
}

void write_sample_csv(std::ostream& os, const LimitSample& sample) {
    const int n = sample.points.empty() ? 0 : sample.points.front().dim();
    os << "index";
    for (int k = 1; k <= n; ++k) os << ",re_z" << k << ",im_z" << k;
    os << "\n";
    char buf[32];
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        os << i;
        for (int k = 0; k < n; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", sample.points[i].coords()(k).real());
            os << ',' << buf;
            std::snprintf(buf, sizeof buf, "%.17g", sample.points[i].coords()(k).imag());
            os << ',' << buf;
        }
        os << "\n";
    }
}

} // namespace chyp
