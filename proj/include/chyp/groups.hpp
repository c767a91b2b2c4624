#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chyp/ball.hpp"

namespace chyp {

// Named generator set for a discrete subgroup of U(n,1).
// Immutable after construction; generators are validated isometries and, when
// integer_entries is set, all matrix entries are within 1e-12 of integers.
class GroupSpec {
public:
    GroupSpec(std::string name, int ambient_dim, std::vector<IsometryElement> generators,
              bool integer_entries, std::optional<double> expected_delta,
              std::string provenance);

    const std::string& name() const { return name_; }
    int dim() const { return ambient_dim_; }
    const std::vector<IsometryElement>& generators() const { return generators_; }
    bool integer_entries() const { return integer_entries_; }
    std::optional<double> expected_delta() const { return expected_delta_; }
    const std::string& provenance() const { return provenance_; }

    // Generators plus inverses, deduplicated up to a unit phase.
    std::vector<IsometryElement> symmetrized_generators() const;

private:
    std::string name_;
    int ambient_dim_;
    std::vector<IsometryElement> generators_;
    bool integer_entries_;
    std::optional<double> expected_delta_;
    std::string provenance_;
};

// Membership test for the congruence kernel { M : M = I (mod m) }.
// Only meaningful for integer-entry groups; kernel has finite index.
class CongruencePredicate {
public:
    CongruencePredicate(int modulus);

    int modulus() const { return modulus_; }

    // True iff every entry of the (integer) matrix reduces to the identity
    // matrix mod m. Throws if an entry is not within 1e-9 of an integer.
    bool matches(const CMatrix& m) const;

private:
    int modulus_;
};

// Max-entry distance between M1 and the best unit-phase multiple of M2,
// i.e. distance as projective transformations. Same-shape matrices only.
double projective_gap(const CMatrix& m1, const CMatrix& m2);

// Symmetric-square embedding PSL(2,R) -> SO(2,1) < U(2,1), basepoint-
// compatible: SO(2) maps to the stabilizer of the ball origin and the
// curvature -1 translation length of A equals d(0, image.0).
// Requires |det A - 1| < 1e-9.
IsometryElement sl2r_to_so21(const Eigen::Matrix2d& a);

// Cayley conjugation SL(2,R) -> SU(1,1) < U(1,1); the disk picture of the
// same hyperbolic motion. Ball displacement is half the curvature -1 one.
IsometryElement sl2r_to_su11(const Eigen::Matrix2d& a);

// Embed a U(k,1) element into U(n,1) acting on the first k+1 homogeneous
// coordinates, identity on the rest. Requires n >= element dimension.
IsometryElement block_extend(const IsometryElement& g, int n);

// Trivial group (identity generator only); a convergence fixture.
GroupSpec trivial_group(int n);

// Rotation generators a, b of the von Dyck (p,q,r) triangle group acting on
// a totally real hyperbolic plane: a^p = b^q = (ab)^r = 1, delta = 1.
// Requires 1/p + 1/q + 1/r < 1 and n >= 2.
GroupSpec real_fuchsian_triangle(int p, int q, int r, int n);

// The same SL(2,R) triangle generators pushed through sl2r_to_su11 and placed
// on the (z0,z1) block; preserves the complex geodesic {z2=...=zn=0}, delta = 2.
GroupSpec complex_fuchsian(int p, int q, int r, int n);

// Single loxodromic generator with translation length t along a complex
// geodesic axis through the origin; delta = 0.
GroupSpec cyclic_loxodromic(double t, int n);

// Free group of rank 2 with integer matrices: [[1,2],[0,1]], [[1,0],[2,1]]
// through the symmetric square. The congruence-filtration fixture.
GroupSpec sanov_group(int n);

// Conjugate generator 0 by exp(eps*K) for a seeded random J-skew-Hermitian K,
// re-projected onto U(n,1). Clears expected_delta (only a lower bound is
// known) and the integer flag. eps = 0 returns the spec unchanged;
// eps > 0.5 is rejected (no discreteness control).
GroupSpec quasi_fuchsian_perturb(const GroupSpec& spec, double eps, std::uint64_t seed);

// Reduction-mod-m predicate for an integer-entry group. Rejects m < 2 and
// degenerate filtrations where every generator is already = I (mod m).
CongruencePredicate congruence_filter(const GroupSpec& spec, int modulus);

} // namespace chyp
