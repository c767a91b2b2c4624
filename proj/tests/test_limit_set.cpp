#include <doctest.h>

#include <cmath>
#include <sstream>

#include "chyp/groups.hpp"
#include "chyp/limit_set.hpp"
#include "chyp/orbit.hpp"
#include "chyp/series.hpp"

using namespace chyp;

TEST_CASE("cyclic limit set: two axis endpoints") {
    const GroupSpec g = cyclic_loxodromic(1.0, 2);
    const LimitSample sample = sample_limit_set(g, 25, 600, 12345);
    REQUIRE(sample.points.size() == 600);
    CHECK(sample.near_boundary);

    // Cluster at 1e-6: exactly the two fixed points (+-1, 0).
    std::vector<CVector> centers;
    for (const BoundaryPoint& p : sample.points) {
        bool found = false;
        for (const CVector& c : centers)
            if ((p.coords() - c).norm() <= 1e-6) {
                found = true;
                break;
            }
        if (!found) centers.push_back(p.coords());
    }
    REQUIRE(centers.size() == 2);
    for (const CVector& c : centers) {
        CHECK(std::abs(std::abs(c(0).real()) - 1.0) < 1e-9);
        CHECK(std::abs(c(0).imag()) < 1e-9);
        CHECK(std::abs(c(1)) < 1e-9);
    }

    const DimensionEstimate dim =
        box_dimension(sample, geometric_scales(0.4, 0.01, 5));
    CHECK(dim.degenerate);
    CHECK(dim.dim_hat == 0.0);
}

TEST_CASE("real fuchsian samples lie on the real circle") {
    const GroupSpec g = real_fuchsian_triangle(2, 3, 7, 2);
    const LimitSample sample = sample_limit_set(g, 30, 600, 99);
    for (const BoundaryPoint& p : sample.points) {
        CHECK(p.coords().imag().cwiseAbs().maxCoeff() < 1e-5);
        CHECK(std::abs(p.coords().norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("sampling is deterministic under the seed") {
    const GroupSpec g = real_fuchsian_triangle(2, 3, 7, 2);
    const LimitSample a = sample_limit_set(g, 25, 200, 77);
    const LimitSample b = sample_limit_set(g, 25, 200, 77);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        CHECK((a.points[i].coords() - b.points[i].coords()).norm() == 0.0);

    const LimitSample c = sample_limit_set(g, 25, 200, 78);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if ((a.points[i].coords() - c.points[i].coords()).norm() != 0.0) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("box dimension: real fuchsian is one-dimensional in the Koranyi metric") {
    const GroupSpec g = real_fuchsian_triangle(2, 3, 7, 2);
    const LimitSample sample = sample_limit_set(g, 40, 1500, 2024);
    const DimensionEstimate dim =
        box_dimension(sample, geometric_scales(0.3, 0.009, 6));
    CHECK(dim.dim_hat == doctest::Approx(1.0).epsilon(0.2));
    CHECK(dim.fit_r2 > 0.98);
    CHECK_FALSE(dim.degenerate);
}

TEST_CASE("box dimension: complex fuchsian doubles in the Koranyi metric") {
    const GroupSpec g = complex_fuchsian(2, 3, 7, 2);
    const LimitSample sample = sample_limit_set(g, 40, 12000, 2025);
    const std::vector<double> scales = geometric_scales(0.95, 0.03, 6);

    const DimensionEstimate koranyi = box_dimension(sample, scales);
    CHECK(koranyi.dim_hat == doctest::Approx(2.0).epsilon(0.15));

    // Euclidean counting on the same sample sees an ordinary circle.
    const DimensionEstimate euclid =
        box_dimension(sample, scales, BoundaryMetric::euclidean);
    CHECK(euclid.dim_hat == doctest::Approx(1.0).epsilon(0.3));
}

TEST_CASE("dimension estimate is stable under group action and union of seeds") {
    const GroupSpec g = real_fuchsian_triangle(2, 3, 7, 2);
    const std::vector<double> scales = geometric_scales(0.3, 0.009, 6);

    const LimitSample s1 = sample_limit_set(g, 40, 1200, 31);
    const DimensionEstimate d1 = box_dimension(s1, scales);

    // Apply a fixed group element to the whole sample.
    const IsometryElement mover = g.generators()[1] * g.generators()[0];
    LimitSample moved = s1;
    moved.points.clear();
    for (const BoundaryPoint& p : s1.points) {
        CVector lift(3);
        lift << Complex(1, 0), p.coords()(0), p.coords()(1);
        CVector v = mover.matrix() * lift;
        CVector z(2);
        z << v(1) / v(0), v(2) / v(0);
        moved.points.emplace_back(CVector(z / z.norm()));
    }
    const DimensionEstimate d2 = box_dimension(moved, scales);
    CHECK(std::abs(d1.dim_hat - d2.dim_hat) <= 0.05);

    const LimitSample s2 = sample_limit_set(g, 40, 1200, 32);
    LimitSample merged = s1;
    merged.points.insert(merged.points.end(), s2.points.begin(), s2.points.end());
    const DimensionEstimate du = box_dimension(merged, scales);
    CHECK(du.dim_hat <= std::max(d1.dim_hat, box_dimension(s2, scales).dim_hat) + 0.05);
}

TEST_CASE("dimension matches the expected exponent for the fixtures") {
    {
        const GroupSpec g = real_fuchsian_triangle(2, 3, 7, 2);
        const LimitSample sample = sample_limit_set(g, 40, 1500, 7);
        const DimensionEstimate dim = box_dimension(sample, geometric_scales(0.3, 0.009, 6));
        CHECK(std::abs(dim.dim_hat - *g.expected_delta()) <= 0.3);
    }
    {
        const GroupSpec g = cyclic_loxodromic(1.0, 2);
        const LimitSample sample = sample_limit_set(g, 25, 600, 7);
        const DimensionEstimate dim = box_dimension(sample, geometric_scales(0.4, 0.01, 5));
        CHECK(std::abs(dim.dim_hat - *g.expected_delta()) <= 0.3);
    }
}

TEST_CASE("box dimension input validation") {
    const GroupSpec g = cyclic_loxodromic(1.0, 2);
    const LimitSample small = sample_limit_set(g, 25, 120, 5);
    CHECK_THROWS_AS(box_dimension(small, geometric_scales(0.4, 0.01, 5)),
                    std::invalid_argument);  // < 500 points

    const LimitSample ok = sample_limit_set(g, 25, 600, 5);
    CHECK_THROWS_AS(box_dimension(ok, geometric_scales(0.4, 0.2, 4)),
                    std::invalid_argument);  // < 1.5 decades
    CHECK_THROWS_AS(box_dimension(ok, geometric_scales(0.4, 0.01, 3)),
                    std::invalid_argument);  // < 4 scales
    CHECK_THROWS_AS(sample_limit_set(g, 0, 10, 1), std::invalid_argument);
}

TEST_CASE("sample csv dump") {
    const GroupSpec g = cyclic_loxodromic(1.0, 2);
    const LimitSample sample = sample_limit_set(g, 20, 10, 42);
    std::ostringstream os;
    write_sample_csv(os, sample);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "index,re_z1,im_z1,re_z2,im_z2");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 10);
}
