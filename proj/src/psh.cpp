#include "chyp/psh.hpp"

#include <cmath>

#include "chyp/rng.hpp"

namespace chyp {

namespace {

// Sum of (|g z|^2 - 1) over the first `terms` elements, fixed order.
double field_sum(const OrbitSet& orbit, std::size_t terms, const CVector& lift) {
    const int n1 = lift.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < terms; ++i) {
        const Complex* m = orbit.matrix(i).data();
        double norm0 = 0.0, rest = 0.0;
        for (int row = 0; row < n1; ++row) {
            Complex v = 0.0;
            for (int col = 0; col < n1; ++col) v += m[row + col * n1] * lift(col);
            if (row == 0)
                norm0 = std::norm(v);
            else
                rest += std::norm(v);
        }
        sum += (rest - norm0) / norm0;  // |g z|^2 - 1 = q(v)/|v0|^2
    }
    return sum;
}

BallPoint shifted(const BallPoint& z, const CVector& v, Complex w) {
    return BallPoint(z.coords() + w * v);
}

BallPoint sample_point(int n, double rmax, Rng& rng) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
    const double norm = std::max(1e-12, v.norm());
    v *= rng.uniform(0.05, rmax) / norm;
    return BallPoint(std::move(v));
}

CVector sample_direction(int n, Rng& rng) {
    CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_gaussian();
    v /= std::max(1e-12, v.norm());
    return v;
}

} // namespace

TruncatedField::TruncatedField(OrbitSet orbit, std::string id, double truncation_radius)
    : orbit_(std::move(orbit)), id_(std::move(id)), truncation_radius_(truncation_radius) {
    terms_ = orbital_counting(orbit_, truncation_radius_).count;
    if (terms_ == 0) throw std::invalid_argument("TruncatedField: no terms inside truncation");
}

double TruncatedField::operator()(const BallPoint& z) const {
    if (z.dim() != orbit_.dim())
        throw std::invalid_argument("TruncatedField: dimension mismatch");
    return field_sum(orbit_, terms_, lift_from_ball(z));
}

std::vector<double> TruncatedField::partial_sums(const BallPoint& z) const {
    if (z.dim() != orbit_.dim())
        throw std::invalid_argument("TruncatedField: dimension mismatch");
    const CVector lift = lift_from_ball(z);
    const int n1 = lift.size();
    std::vector<double> sums;
    sums.reserve(terms_);
    double acc = 0.0;
    for (std::size_t i = 0; i < terms_; ++i) {
        const Complex* m = orbit_.matrix(i).data();
        double norm0 = 0.0, rest = 0.0;
        for (int row = 0; row < n1; ++row) {
            Complex v = 0.0;
            for (int col = 0; col < n1; ++col) v += m[row + col * n1] * lift(col);
            if (row == 0)
                norm0 = std::norm(v);
            else
                rest += std::norm(v);
        }
        acc += (rest - norm0) / norm0;
        sums.push_back(acc);
    }
    return sums;
}

double levi_form_fd(const FieldFn& f, const BallPoint& z, const CVector& v, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("levi_form_fd: eps must be positive");
    const double vnorm = v.norm();
    if (vnorm == 0.0) throw std::invalid_argument("levi_form_fd: zero direction");
    const double cap = (1.0 - z.norm()) / (10.0 * vnorm);
    const double e = std::min(eps, cap);
    const Complex i(0, 1);
    const double stencil = f(shifted(z, v, e)) + f(shifted(z, v, -e)) +
                           f(shifted(z, v, i * e)) + f(shifted(z, v, -i * e)) - 4.0 * f(z);
    return stencil / (4.0 * e * e);
}

double submean_margin(const FieldFn& f, const BallPoint& z, const CVector& v, double r,
                      int n_samples) {
    if (n_samples < 3) throw std::invalid_argument("submean_margin: need >= 3 samples");
    if (!(r > 0.0)) throw std::invalid_argument("submean_margin: radius must be positive");
    double mean = 0.0;
    for (int j = 0; j < n_samples; ++j) {
        const double theta = 2.0 * 3.14159265358979323846 * j / n_samples;
        mean += f(shifted(z, v, std::polar(r, theta)));
    }
    mean /= n_samples;
    return mean - f(z);
}

DiskProbeReport max_principle_probe(const FieldFn& f, const BallPoint& z, const CVector& v,
                                    double r, int n_radial, int n_angular) {
    if (n_radial < 2 || n_angular < 4)
        throw std::invalid_argument("max_principle_probe: grid too coarse");
    DiskProbeReport report;
    report.interior_max = -std::numeric_limits<double>::infinity();
    report.boundary_max = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_angular; ++a) {
        const double theta = 2.0 * 3.14159265358979323846 * a / n_angular;
        for (int k = 0; k <= n_radial; ++k) {
            const double rho = r * k / n_radial;
            const double val = f(shifted(z, v, std::polar(rho, theta)));
            if (k == n_radial)
                report.boundary_max = std::max(report.boundary_max, val);
            else
                report.interior_max = std::max(report.interior_max, val);
        }
    }
    report.pass = report.interior_max <= report.boundary_max + 1e-7;
    return report;
}

double invariance_residual(const TruncatedField& f, const IsometryElement& g,
                           const BallPoint& z) {
    return std::abs(f(apply_isometry(g, z)) - f(z));
}

std::vector<FiltrationRow> filtered_convergence(const GroupSpec& spec, const OrbitSet& orbit,
                                                const std::vector<int>& moduli,
                                                const std::vector<BallPoint>& samples) {
    if (samples.empty())
        throw std::invalid_argument("filtered_convergence: empty sample set");
    if (!spec.integer_entries())
        throw std::invalid_argument("filtered_convergence: group does not have integer entries");
    std::vector<FiltrationRow> rows;
    for (int m : moduli) {
        const CongruencePredicate pred(m);
        const OrbitSet kernel = orbit.filtered(pred);
        FiltrationRow row;
        row.modulus = m;
        row.kernel_nontrivial = kernel.size() - 1;
        row.kernel_min_displacement = min_displacement(kernel);
        const TruncatedField fm(kernel, spec.name() + "-mod-" + std::to_string(m));
        double sup = 0.0;
        for (const BallPoint& z : samples) {
            const double base = z.squared_norm() - 1.0;
            sup = std::max(sup, std::abs(fm(z) - base));
        }
        row.sup_norm = sup;
        rows.push_back(row);
    }
    return rows;
}

CertificateReport certify_field(const TruncatedField& f, const CertificateConfig& cfg) {
    if (cfg.eps.size() < 1) throw std::invalid_argument("certify_field: need an eps list");
    CertificateReport report;
    report.field_id = f.id();
    report.terms = f.term_count();
    report.truncation_radius = f.truncation_radius();
    report.n_points = cfg.n_points;
    report.n_directions = cfg.n_directions;
    report.min_levi = std::numeric_limits<double>::infinity();
    report.min_submean_margin = std::numeric_limits<double>::infinity();
    report.max_disk_excess = -std::numeric_limits<double>::infinity();

    const int n = f.orbit().dim();
    const FieldFn fn = f;
    Rng rng(cfg.seed);

    for (int p = 0; p < cfg.n_points; ++p) {
        const BallPoint z = sample_point(n, cfg.sample_rmax, rng);
        for (int d = 0; d < cfg.n_directions; ++d) {
            const CVector v = sample_direction(n, rng);
            double prev = 0.0;
            for (std::size_t e = 0; e < cfg.eps.size(); ++e) {
                const double levi = levi_form_fd(fn, z, v, cfg.eps[e]);
                report.min_levi = std::min(report.min_levi, levi);
                if (e > 0)
                    report.max_eps_disagreement =
                        std::max(report.max_eps_disagreement, std::abs(levi - prev));
                prev = levi;
            }
            const double r = std::min(cfg.submean_radius, (1.0 - z.norm()) / 4.0);
            report.min_submean_margin = std::min(
                report.min_submean_margin, submean_margin(fn, z, v, r, cfg.submean_samples));
        }
        // Exact termwise monotonicity of the partial sums at this point.
        const std::vector<double> sums = f.partial_sums(z);
        for (std::size_t k = 1; k < sums.size(); ++k)
            if (sums[k] > sums[k - 1]) ++report.monotonicity_violations;
    }

    for (int disk = 0; disk < cfg.n_disks; ++disk) {
        const BallPoint z = sample_point(n, cfg.sample_rmax, rng);
        const CVector v = sample_direction(n, rng);
        const double r = std::min(0.1, (1.0 - z.norm()) / 4.0);
        const DiskProbeReport probe = max_principle_probe(fn, z, v, r, 6, 16);
        report.max_disk_excess =
            std::max(report.max_disk_excess, probe.interior_max - probe.boundary_max);
        if (!probe.pass) ++report.disks_failed;
    }
    return report;
}

} // namespace chyp
