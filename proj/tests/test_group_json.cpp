#include <doctest.h>

#include "chyp/group_json.hpp"
#include "chyp/groups.hpp"

using namespace chyp;

TEST_CASE("round trip is bit-exact") {
    for (const GroupSpec& spec :
         {sanov_group(2), real_fuchsian_triangle(2, 3, 7, 2), complex_fuchsian(2, 3, 7, 3),
          cyclic_loxodromic(0.75, 2), quasi_fuchsian_perturb(real_fuchsian_triangle(2, 3, 7, 2),
                                                             0.05, 9)}) {
        const GroupSpec back = group_from_json(group_to_json(spec));
        CHECK(back.name() == spec.name());
        CHECK(back.dim() == spec.dim());
        CHECK(back.integer_entries() == spec.integer_entries());
        CHECK(back.expected_delta() == spec.expected_delta());
        CHECK(back.provenance() == spec.provenance());
        REQUIRE(back.generators().size() == spec.generators().size());
        for (std::size_t i = 0; i < spec.generators().size(); ++i) {
            const CMatrix& a = spec.generators()[i].matrix();
            const CMatrix& b = back.generators()[i].matrix();
            CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);  // bitwise round trip
        }
    }
}

TEST_CASE("unknown and missing fields are rejected") {
    const std::string good = group_to_json(cyclic_loxodromic(1.0, 1));
    CHECK(group_from_json(good).name() == "cyclic(1.000000)");

    std::string extra = good;
    extra.insert(extra.find('{') + 1, "\"surprise\": 1,");
    CHECK_THROWS_AS(group_from_json(extra), std::invalid_argument);

    // Remove a required field.
    std::string missing = good;
    const auto pos = missing.find("\"provenance\"");
    REQUIRE(pos != std::string::npos);
    const auto end = missing.find('\n', pos);
    missing.erase(pos, end - pos + 1);
    CHECK_THROWS_AS(group_from_json(missing), std::invalid_argument);
}

TEST_CASE("validation happens on load") {
    // A non-isometry generator must be rejected by the IsometryElement gate.
    std::string text = R"({
  "name": "bad",
  "n": 1,
  "generators": [[[[2.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [2.0, 0.0]]]],
  "integer_entries": false,
  "expected_delta": null,
  "provenance": "test"
})";
    CHECK_THROWS_AS(group_from_json(text), std::invalid_argument);
}
