#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "chyp/ball.hpp"
#include "chyp/groups.hpp"
#include "chyp/orbit.hpp"

namespace chyp {

// Truncated Poincare-type field F(z) = sum (|gamma z|^2 - 1) over enumerated
// elements with displacement <= truncation_radius, in the orbit's canonical
// order (ascending displacement, ties by word). Every summand lies in [-1, 0).
class TruncatedField {
public:
    TruncatedField(OrbitSet orbit, std::string id,
                   double truncation_radius = std::numeric_limits<double>::infinity());

    double operator()(const BallPoint& z) const;

    // S_1, ..., S_m at z; monotonically nonincreasing since every term is < 0.
    std::vector<double> partial_sums(const BallPoint& z) const;

    std::size_t term_count() const { return terms_; }
    double truncation_radius() const { return truncation_radius_; }
    const OrbitSet& orbit() const { return orbit_; }
    const std::string& id() const { return id_; }

private:
    OrbitSet orbit_;
    std::string id_;
    double truncation_radius_;
    std::size_t terms_;
};

using FieldFn = std::function<double(const BallPoint&)>;

// Rotation-averaged 4-point stencil for the complex Hessian quadratic form
// along v: (F(z+ev) + F(z-ev) + F(z+iev) + F(z-iev) - 4F(z)) / (4e^2).
// The step is capped adaptively at (1-|z|)/(10 |v|); nonnegative up to
// O(eps^2) + roundoff for plurisubharmonic F.
double levi_form_fd(const FieldFn& f, const BallPoint& z, const CVector& v, double eps);

// Disk submean margin: mean of F on the circle z + r e^{i theta} v minus
// F(z); nonnegative up to roundoff for plurisubharmonic F.
double submean_margin(const FieldFn& f, const BallPoint& z, const CVector& v, double r,
                      int n_samples);

struct DiskProbeReport {
    double interior_max = 0.0;
    double boundary_max = 0.0;
    bool pass = false;  // interior_max <= boundary_max + 1e-7
};

// Maximum-principle probe on the holomorphic disk z + w v, |w| <= r.
DiskProbeReport max_principle_probe(const FieldFn& f, const BallPoint& z, const CVector& v,
                                    double r, int n_radial, int n_angular);

// |F(g z) - F(z)| for the truncated field; bounded by the two series tails,
// so it shrinks as the truncation radius grows.
double invariance_residual(const TruncatedField& f, const IsometryElement& g,
                           const BallPoint& z);

struct FiltrationRow {
    int modulus = 0;
    std::size_t kernel_nontrivial = 0;     // enumerated kernel elements != id
    double kernel_min_displacement = 0.0;  // +inf when the kernel is trivial
    double sup_norm = 0.0;                 // sup |F_m(z) - (|z|^2 - 1)| over samples
};

// Congruence-filtered convergence table: for each modulus m, the filtered
// field F_m sums over enumerated elements = I (mod m); as the kernel thins
// out, F_m approaches the single-term field |z|^2 - 1.
std::vector<FiltrationRow> filtered_convergence(const GroupSpec& spec, const OrbitSet& orbit,
                                                const std::vector<int>& moduli,
                                                const std::vector<BallPoint>& samples);

struct CertificateConfig {
    int n_points = 50;
    int n_directions = 10;
    std::vector<double> eps = {1e-3, 1e-4};
    double submean_radius = 0.05;
    int submean_samples = 16;
    int n_disks = 10;
    double sample_rmax = 0.7;
    std::uint64_t seed = 20240901;
};

struct CertificateReport {
    std::string field_id;
    std::size_t terms = 0;
    double truncation_radius = 0.0;
    int n_points = 0;
    int n_directions = 0;
    double min_levi = 0.0;
    double max_eps_disagreement = 0.0;  // |levi(eps1) - levi(eps2)|, worst case
    double min_submean_margin = 0.0;
    std::size_t monotonicity_violations = 0;  // S_{k+1} > S_k events, exact compare
    double max_disk_excess = 0.0;       // interior_max - boundary_max, worst disk
    std::size_t disks_failed = 0;
};

// Runs the numerical plurisubharmonicity certificates on seeded sample
// points and directions.
CertificateReport certify_field(const TruncatedField& f, const CertificateConfig& cfg);

} // namespace chyp
