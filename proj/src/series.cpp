#include "chyp/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace chyp {

namespace {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss_res = 0;
    for (int i = 0; i < n; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss_res += e * e;
    }
    if (n > 2) f.slope_stderr = std::sqrt(ss_res / (n - 2) / sxx);
    f.r2 = (syy > 0) ? 1.0 - ss_res / syy : 1.0;
    return f;
}

// 1 - |g z|^2 and d(0, g z) evaluated from the same homogeneous image, so the
// two sides of the distance identity stay consistent to roundoff.
struct TermGeometry {
    double gap;   // 1 - |g z|^2
    double dist;  // d(0, g z)
};

TermGeometry term_geometry(const Complex* m, int n1, const CVector& lift) {
    double norm0 = 0.0;
    double rest = 0.0;
    for (int i = 0; i < n1; ++i) {
        Complex v = 0.0;
        for (int j = 0; j < n1; ++j) v += m[i + j * n1] * lift(j);
        if (i == 0)
            norm0 = std::norm(v);
        else
            rest += std::norm(v);
    }
    const double gap = (norm0 - rest) / norm0;   // -q(v)/|v0|^2
    const double c2 = norm0 / (norm0 - rest);    // cosh^2 d
    TermGeometry t;
    t.gap = gap;
    t.dist = std::acosh(std::sqrt(std::max(1.0, c2)));
    return t;
}

} // namespace

SeriesEstimate poincare_sum(const OrbitSet& orbit, double s, double radius) {
    if (!(s >= 0.0)) throw std::invalid_argument("poincare_sum: s must be >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("poincare_sum: radius must be positive");
    SeriesEstimate est;
    est.s = s;
    est.truncation_radius = radius;
    est.trusted = radius <= orbit.complete_radius();
    const double limit = radius + 1e-12 * std::max(1.0, radius);
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const double d = orbit.displacement(i);
        if (d > limit) break;
        est.last_increment = std::exp(-s * d);
        est.partial_sum += est.last_increment;
        ++est.term_count;
    }
    return est;
}

FitWindow default_fit_window(const OrbitSet& orbit) {
    FitWindow w;
    w.r_hi = orbit.complete_radius();
    w.r_lo = w.r_hi / 3.0;
    w.n_points = 8;
    return w;
}

ExponentFit critical_exponent(const OrbitSet& orbit, const FitWindow& window) {
    if (window.n_points < 5)
        throw std::invalid_argument("critical_exponent: need at least 5 sample radii");
    if (!(window.r_lo > 0.0) || !(window.r_hi > window.r_lo))
        throw std::invalid_argument("critical_exponent: bad window");
    if (window.r_hi > orbit.complete_radius() * (1.0 + 1e-9) + 1e-9)
        throw std::invalid_argument("critical_exponent: window exceeds the completeness radius");

    std::vector<double> radii(window.n_points), logs(window.n_points);
    for (int i = 0; i < window.n_points; ++i) {
        radii[i] = window.r_lo + (window.r_hi - window.r_lo) * i / (window.n_points - 1);
        const std::size_t n = orbital_counting(orbit, radii[i]).count;
        if (n < 2)
            throw std::invalid_argument("critical_exponent: too few orbit points in window");
        logs[i] = std::log(static_cast<double>(n));
    }

    const double bound = 2.0 * orbit.dim();
    const LinearFit f = fit_line(radii, logs);

    ExponentFit out;
    out.primary.delta_hat = std::clamp(f.slope, 0.0, bound);
    out.primary.window_lo = window.r_lo;
    out.primary.window_hi = window.r_hi;
    out.primary.slope_stderr = f.slope_stderr;
    out.primary.n_points = window.n_points;
    out.primary.method = "log-count-slope";

    out.endpoint.delta_hat = std::clamp(logs.back() / window.r_hi, 0.0, bound);
    out.endpoint.window_lo = window.r_lo;
    out.endpoint.window_hi = window.r_hi;
    out.endpoint.slope_stderr = 0.0;
    out.endpoint.n_points = window.n_points;
    out.endpoint.method = "endpoint-ratio";
    return out;
}

BoundCheckReport bound_check(const OrbitSet& orbit, const BallPoint& z) {
    if (z.dim() != orbit.dim())
        throw std::invalid_argument("bound_check: dimension mismatch");
    const int n1 = orbit.dim() + 1;
    const CVector lift = lift_from_ball(z);
    BoundCheckReport report;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const TermGeometry t = term_geometry(orbit.matrix(i).data(), n1, lift);
        const double e2 = std::exp(-2.0 * t.dist);
        const double lower = (e2 - t.gap) / e2;
        const double upper = (t.gap - 4.0 * e2) / (4.0 * e2);
        const double v = std::max(0.0, std::max(lower, upper));
        if (v > report.max_violation) {
            report.max_violation = v;
            report.argmax_index = i;
        }
        ++report.checked;
    }
    return report;
}

DivergenceProfile divergence_profile(const OrbitSet& orbit, double s,
                                     const std::vector<double>& radii) {
    if (radii.size() < 2)
        throw std::invalid_argument("divergence_profile: need at least 2 radii");
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("divergence_profile: radii must increase");

    DivergenceProfile prof;
    prof.s = s;
    prof.radii = radii;
    prof.partial_sums.resize(radii.size());
    double sum = 0.0;
    std::size_t at = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        const double limit = radii[k] + 1e-12 * std::max(1.0, radii[k]);
        while (at < orbit.size() && orbit.displacement(at) <= limit) {
            sum += std::exp(-s * orbit.displacement(at));
            ++at;
        }
        prof.partial_sums[k] = sum;
    }

    const LinearFit lin = fit_line(prof.radii, prof.partial_sums);
    prof.linear_slope = lin.slope;
    prof.linear_r2 = lin.r2;
    std::vector<double> logs(prof.partial_sums.size());
    for (std::size_t k = 0; k < logs.size(); ++k) logs[k] = std::log(prof.partial_sums[k]);
    prof.log_slope = fit_line(prof.radii, logs).slope;
    return prof;
}

double gap_series(const OrbitSet& orbit, const BallPoint& z, double radius) {
    if (z.dim() != orbit.dim())
        throw std::invalid_argument("gap_series: dimension mismatch");
    const int n1 = orbit.dim() + 1;
    const CVector lift = lift_from_ball(z);
    const double limit =
        std::isinf(radius) ? radius : radius + 1e-12 * std::max(1.0, radius);
    double sum = 0.0;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        if (orbit.displacement(i) > limit) break;
        sum += term_geometry(orbit.matrix(i).data(), n1, lift).gap;
    }
    return sum;
}

double jacobian_bound(double delta, int p) {
    if (!(delta >= 0.0)) throw std::invalid_argument("jacobian_bound: delta must be >= 0");
    if (p < 2) throw std::invalid_argument("jacobian_bound: p must be >= 2");
    return std::pow((delta + 1.0) / p, p);
}

void write_series_csv(std::ostream& os, const OrbitSet& orbit, double s,
                      const std::vector<double>& radii) {
    const DivergenceProfile prof = divergence_profile(orbit, s, radii);
    os << "R,N,partial_sum\n";
    char buf[32];
    for (std::size_t k = 0; k < radii.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", radii[k]);
        os << buf << ',' << orbital_counting(orbit, radii[k]).count << ',';
        std::snprintf(buf, sizeof buf, "%.17g", prof.partial_sums[k]);
        os << buf << "\n";
    }
}

} // namespace chyp
