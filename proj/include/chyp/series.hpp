#pragma once

#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "chyp/ball.hpp"
#include "chyp/orbit.hpp"

namespace chyp {

struct SeriesEstimate {
    double s = 0.0;
    double truncation_radius = 0.0;
    double partial_sum = 0.0;
    double last_increment = 0.0;
    std::size_t term_count = 0;
    bool trusted = true;  // truncation within the orbit's complete radius
};

// Truncated Poincare series sum_{d(0,g.0) <= R} e^{-s d(0,g.0)}, identity
// included, summed in ascending displacement order. Requires s >= 0.
SeriesEstimate poincare_sum(const OrbitSet& orbit, double s, double radius);

struct FitWindow {
    double r_lo = 0.0;
    double r_hi = 0.0;
    int n_points = 8;
};

// Default window per the asymptotic-transient tradeoff: upper end at the
// completeness radius, lower end a third of it, 8 equispaced radii.
FitWindow default_fit_window(const OrbitSet& orbit);

struct ExponentEstimate {
    double delta_hat = 0.0;
    double window_lo = 0.0;
    double window_hi = 0.0;
    double slope_stderr = 0.0;
    int n_points = 0;
    std::string method;  // "log-count-slope" or "endpoint-ratio"
};

struct ExponentFit {
    ExponentEstimate primary;   // least-squares slope of log N(R) against R
    ExponentEstimate endpoint;  // cross-check: log N(R1) / R1
};

// Growth-rate surrogate for the critical exponent, clamped to [0, 2n].
// Throws when the window exceeds the completeness radius, has fewer than 5
// radii, or contains too few orbit points.
ExponentFit critical_exponent(const OrbitSet& orbit, const FitWindow& window);

struct BoundCheckReport {
    double max_violation = 0.0;     // relative slack of either inequality
    std::size_t argmax_index = 0;   // orbit index attaining it
    std::size_t checked = 0;
};

// Verifies e^{-2 d(0,gz)} <= 1-|gz|^2 <= 4 e^{-2 d(0,gz)} termwise over the
// enumerated orbit.
BoundCheckReport bound_check(const OrbitSet& orbit, const BallPoint& z);

struct DivergenceProfile {
    double s = 0.0;
    std::vector<double> radii;
    std::vector<double> partial_sums;
    double linear_slope = 0.0;  // fit of partial_sum against R
    double linear_r2 = 0.0;
    double log_slope = 0.0;     // fit of log(partial_sum) against R
};

// Partial sums of the e^{-s d} series on an increasing radius schedule.
// Divergence is never claimed, only the growth profile is reported.
DivergenceProfile divergence_profile(const OrbitSet& orbit, double s,
                                     const std::vector<double>& radii);

// sum (1 - |g z|^2) over enumerated elements with displacement <= radius.
double gap_series(const OrbitSet& orbit, const BallPoint& z,
                  double radius = std::numeric_limits<double>::infinity());

// ((delta+1)/p)^p; < 1 on the contraction window delta < 2k-1, p >= 2k.
double jacobian_bound(double delta, int p);

// CSV rows (R, N(R), partial_sum at exponent s) for the radius schedule.
void write_series_csv(std::ostream& os, const OrbitSet& orbit, double s,
                      const std::vector<double>& radii);

} // namespace chyp
