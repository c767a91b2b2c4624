#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "chyp/ball.hpp"
#include "chyp/groups.hpp"

namespace chyp {

struct LimitSample {
    std::vector<BoundaryPoint> points;
    int word_len = 0;
    std::uint64_t seed = 0;
    double worst_boundary_gap = 0.0;  // max over samples of 1 - |gamma . 0|
    bool near_boundary = false;       // worst gap <= 1e-6
};

// Applies `count` independent uniformly-random reduced words of length
// word_len to the origin and radially projects onto the boundary sphere.
// Deterministic under the seed, independent of any parallel partitioning.
LimitSample sample_limit_set(const GroupSpec& spec, int word_len, int count,
                             std::uint64_t seed);

enum class BoundaryMetric { koranyi, euclidean };

struct DimensionEstimate {
    double dim_hat = 0.0;
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    double fit_r2 = 0.0;
    bool degenerate = false;  // <= 2 distinct points
};

// Geometric scale schedule from hi down to lo.
std::vector<double> geometric_scales(double hi, double lo, int n);

// Box-counting surrogate via greedy net covering in the chosen boundary
// metric; dim_hat is minus the slope of log count against log scale.
// Requires >= 500 points and >= 4 scales spanning >= 1.5 decades.
DimensionEstimate box_dimension(const LimitSample& sample, const std::vector<double>& scales,
                                BoundaryMetric metric = BoundaryMetric::koranyi);

// CSV dump of the boundary coordinates.
void write_sample_csv(std::ostream& os, const LimitSample& sample);

} // namespace chyp
