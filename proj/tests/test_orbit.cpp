#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "chyp/groups.hpp"
#include "chyp/orbit.hpp"
#include "chyp/rng.hpp"

using namespace chyp;

namespace {

OrbitConfig cfg(int len, double radius = std::numeric_limits<double>::infinity()) {
    OrbitConfig c;
    c.max_word_len = len;
    c.max_radius = radius;
    return c;
}

} // namespace

TEST_CASE("cyclic orbit: closed form displacements") {
    const GroupSpec g = cyclic_loxodromic(1.0, 2);
    const OrbitSet orbit = enumerate_orbit(g, cfg(10, 10.0));
    REQUIRE(orbit.size() == 21);

    // identity first: empty word, displacement 0
    CHECK(orbit.displacement(0) == 0.0);
    CHECK(orbit.word_string(0).empty());
    CHECK(orbit.word_length(0) == 0);

    std::map<int, int> multiplicity;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
        const double d = orbit.displacement(i);
        CHECK(d == doctest::Approx(std::round(d)).epsilon(1e-11));
        ++multiplicity[static_cast<int>(std::round(d))];
    }
    CHECK(multiplicity[0] == 1);
    for (int k = 1; k <= 10; ++k) CHECK(multiplicity[k] == 2);

    CHECK(orbit.complete_radius() > 9.99);
    CHECK(orbit.complete_radius() <= 10.0);
    CHECK_FALSE(orbit.capped());
}

TEST_CASE("sanov and trivial element counts") {
    CHECK(enumerate_orbit(sanov_group(2), cfg(3)).size() == 53);
    CHECK(enumerate_orbit(trivial_group(2), cfg(5)).size() == 1);
}

TEST_CASE("orbital counting") {
    const OrbitSet orbit = enumerate_orbit(cyclic_loxodromic(1.0, 2), cfg(10, 10.0));
    CHECK(orbital_counting(orbit, 0.0).count == 1);
    CHECK(orbital_counting(orbit, 5.5).count == 11);
    CHECK(orbital_counting(orbit, 5.5).trusted);
    CHECK_FALSE(orbital_counting(orbit, 11.0).trusted);

    std::size_t prev = 0;
    for (double r = 0.25; r <= 10.0; r += 0.25) {
        const std::size_t n = orbital_counting(orbit, r).count;
        CHECK(n >= prev);
        prev = n;
    }

    CHECK(min_displacement(orbit) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dedup soundness and tolerance stability") {
    const GroupSpec g = real_fuchsian_triangle(2, 3, 7, 2);
    const OrbitSet orbit = enumerate_orbit(g, cfg(8));

    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t i = rng.below(orbit.size());
        const std::size_t j = rng.below(orbit.size());
        if (i == j) continue;
        const double scale = orbit.matrix(i).cwiseAbs().maxCoeff();
        CHECK(projective_gap(orbit.matrix(i), orbit.matrix(j)) >
              orbit.dedup_tolerance() * scale);
    }

    for (const GroupSpec& spec :
         {cyclic_loxodromic(1.0, 2), sanov_group(2), real_fuchsian_triangle(2, 3, 7, 2),
          complex_fuchsian(2, 3, 7, 2)}) {
        OrbitConfig a = cfg(6);
        OrbitConfig b = cfg(6);
        b.dedup_tolerance = a.dedup_tolerance / 10.0;
        CHECK(enumerate_orbit(spec, a).size() == enumerate_orbit(spec, b).size());
    }
}

TEST_CASE("worker count does not change the result") {
    const GroupSpec g = real_fuchsian_triangle(2, 3, 7, 2);
    OrbitConfig one = cfg(10);
    OrbitConfig four = cfg(10);
    four.workers = 4;
    const OrbitSet a = enumerate_orbit(g, one);
    const OrbitSet b = enumerate_orbit(g, four);
    REQUIRE(a.size() == b.size());
    CHECK(a.complete_radius() == b.complete_radius());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.displacement(i) == b.displacement(i));  // bitwise
        CHECK(a.word_letters(i) == b.word_letters(i));
        CHECK((a.matrix(i) - b.matrix(i)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("matrices reproduce images and displacements") {
    const GroupSpec g = complex_fuchsian(2, 3, 7, 2);
    const OrbitSet orbit = enumerate_orbit(g, cfg(8));
    Rng rng(17);
    const BallPoint origin = BallPoint::origin(2);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t i = rng.below(orbit.size());
        const OrbitElement el = orbit.element(i);
        const BallPoint img = apply_isometry(el.matrix, origin);
        CHECK((img.coords() - el.image.coords()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(distance(origin, el.image) - el.displacement) < 1e-10);
    }
}

TEST_CASE("element cap returns a flagged partial set") {
    OrbitConfig c = cfg(6);
    c.element_cap = 10;
    const OrbitSet orbit = enumerate_orbit(sanov_group(2), c);
    CHECK(orbit.capped());
    CHECK(orbit.size() <= 10);
    CHECK(orbit.size() >= 1);
    CHECK(orbit.complete_radius() < orbit.max_displacement() + 1e-12);
}

TEST_CASE("growth sanity on the (2,3,7) fixtures at desk scale") {
    const OrbitSet real = enumerate_orbit(real_fuchsian_triangle(2, 3, 7, 2), cfg(36, 7.0));
    CHECK(real.complete_radius() == doctest::Approx(7.0));
    const double lo = real.complete_radius() / 3.0, hi = real.complete_radius();
    const double dlog =
        std::log(static_cast<double>(orbital_counting(real, hi).count)) -
        std::log(static_cast<double>(orbital_counting(real, lo).count));
    CHECK(std::abs(dlog - (hi - lo)) <= 0.25 * (hi - lo));

    const OrbitSet cplx = enumerate_orbit(complex_fuchsian(2, 3, 7, 2), cfg(36, 3.5));
    const double clo = cplx.complete_radius() / 3.0, chi = cplx.complete_radius();
    const double cdlog =
        std::log(static_cast<double>(orbital_counting(cplx, chi).count)) -
        std::log(static_cast<double>(orbital_counting(cplx, clo).count));
    CHECK(std::abs(cdlog - 2.0 * (chi - clo)) <= 0.25 * (chi - clo));
}

TEST_CASE("orbit csv dump is stable and labeled") {
    const OrbitSet orbit = enumerate_orbit(sanov_group(2), cfg(2));
    std::ostringstream s1, s2;
    orbit.write_csv(s1);
    orbit.write_csv(s2);
    CHECK(s1.str() == s2.str());

    std::istringstream in(s1.str());
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("word,displacement", 0) == 0);
    std::size_t rows = 0;
    bool saw_identity = false;
    while (std::getline(in, line)) {
        ++rows;
        if (line.rfind("e,0", 0) == 0) saw_identity = true;
    }
    CHECK(rows == orbit.size());
    CHECK(rows == 17);  // 1 + 4 + 12
    CHECK(saw_identity);

    const auto& labels = orbit.letter_labels();
    REQUIRE(labels.size() == 4);
    CHECK(labels[0] == "a");
    CHECK(labels[1] == "b");
    CHECK(labels[2] == "A");
    CHECK(labels[3] == "B");
}

TEST_CASE("input validation") {
    const GroupSpec g = cyclic_loxodromic(1.0, 2);
    CHECK_THROWS_AS(enumerate_orbit(g, cfg(0)), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_orbit(g, cfg(3, -1.0)), std::invalid_argument);
}
