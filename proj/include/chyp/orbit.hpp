#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chyp/ball.hpp"
#include "chyp/groups.hpp"

namespace chyp {

struct OrbitConfig {
    int max_word_len = 1;
    double max_radius = std::numeric_limits<double>::infinity();
    // Result-element cap; overflowing returns a partial set flagged capped().
    std::size_t element_cap = 5'000'000;
    // Relative matrix-compare threshold for deduplication; the quantization
    // grid of the hash key is tolerance/10.
    double dedup_tolerance = 1e-7;
    // Elements with displacement in (max_radius, max_radius + prune_margin]
    // are kept and expanded but excluded from the result, so that word paths
    // may dip slightly beyond the requested ball.
    double prune_margin = 0.5;
    int workers = 1;
};

// One enumerated group element, materialized on access.
struct OrbitElement {
    std::string word;            // letter labels, empty for the identity
    IsometryElement matrix;
    BallPoint image;             // gamma . 0
    double displacement;         // d(0, gamma . 0)
};

// Deduplicated orbit of the origin, sorted by displacement (ties: shorter
// word first, then lexicographic). Immutable; cheap to copy (shared storage).
class OrbitSet {
public:
    std::size_t size() const { return selection_.size(); }
    int dim() const;
    const std::string& group_name() const;

    double displacement(std::size_t i) const;
    // View of the (n+1)x(n+1) matrix of element i; valid while the set lives.
    Eigen::Map<const CMatrix> matrix(std::size_t i) const;
    BallPoint image(std::size_t i) const;
    std::vector<int> word_letters(std::size_t i) const;
    std::string word_string(std::size_t i) const;
    std::size_t word_length(std::size_t i) const;
    OrbitElement element(std::size_t i) const;

    const std::vector<std::string>& letter_labels() const;

    double complete_radius() const;
    double max_displacement() const;
    int max_word_len() const;
    double dedup_tolerance() const;
    bool capped() const;

    // Subset satisfying the congruence predicate (identity always kept);
    // shares storage and keeps ordering and completeness metadata.
    OrbitSet filtered(const CongruencePredicate& pred) const;

    // CSV dump: word, displacement, re/im of the image coordinates.
    void write_csv(std::ostream& os) const;

    struct Storage;

private:
    friend OrbitSet enumerate_orbit(const GroupSpec&, const OrbitConfig&);
    OrbitSet(std::shared_ptr<const Storage> storage, std::vector<std::uint32_t> selection,
             double complete_radius, bool capped);

    std::shared_ptr<const Storage> storage_;
    std::vector<std::uint32_t> selection_;  // indices into storage, sorted order
    double complete_radius_ = 0.0;
    bool capped_ = false;
};

// Breadth-first enumeration over freely reduced words in the symmetrized
// generators, deduplicated up to a unit phase. Contains every element of
// reduced word length <= max_word_len with displacement <= max_radius once
// (the identity included); deterministic for any worker count.
OrbitSet enumerate_orbit(const GroupSpec& spec, const OrbitConfig& config);

struct OrbitCount {
    std::size_t count;
    bool trusted;  // radius within complete_radius
};

// N(R) = #{gamma : d(0, gamma.0) <= R}, identity included.
OrbitCount orbital_counting(const OrbitSet& orbit, double radius);

// Minimum displacement over nontrivial elements satisfying pred (all when
// pred is absent); +infinity when none qualify.
double min_displacement(const OrbitSet& orbit, const CongruencePredicate* pred = nullptr);

} // namespace chyp
