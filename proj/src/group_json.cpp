#include "chyp/group_json.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace chyp {

using nlohmann::json;

std::string group_to_json(const GroupSpec& spec) {
    json j;
    j["name"] = spec.name();
    j["n"] = spec.dim();
    json gens = json::array();
    for (const auto& g : spec.generators()) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < g.matrix().rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < g.matrix().cols(); ++c) {
                const Complex e = g.matrix()(r, c);
                row.push_back(json::array({e.real(), e.imag()}));
            }
            rows.push_back(row);
        }
        gens.push_back(rows);
    }
    j["generators"] = gens;
    j["integer_entries"] = spec.integer_entries();
    if (spec.expected_delta())
        j["expected_delta"] = *spec.expected_delta();
    else
        j["expected_delta"] = nullptr;
    j["provenance"] = spec.provenance();
    return j.dump(2) + "\n";
}

GroupSpec group_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("group json: top level must be an object");
    static const std::set<std::string> known = {"name",            "n",
                                                "generators",      "integer_entries",
                                                "expected_delta",  "provenance"};
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw std::invalid_argument("group json: unknown field '" + item.key() + "'");
    for (const std::string& key : known)
        if (!j.contains(key))
            throw std::invalid_argument("group json: missing field '" + key + "'");

    const int n = j.at("n").get<int>();
    const int n1 = n + 1;
    std::vector<IsometryElement> gens;
    for (const json& rows : j.at("generators")) {
        if (static_cast<int>(rows.size()) != n1)
            throw std::invalid_argument("group json: generator row count mismatch");
        CMatrix m(n1, n1);
        for (int r = 0; r < n1; ++r) {
            const json& row = rows.at(r);
            if (static_cast<int>(row.size()) != n1)
                throw std::invalid_argument("group json: generator column count mismatch");
            for (int c = 0; c < n1; ++c) {
                const json& e = row.at(c);
                if (!e.is_array() || e.size() != 2)
                    throw std::invalid_argument("group json: entries must be [re, im] pairs");
                m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
            }
        }
        gens.emplace_back(std::move(m));
    }

    std::optional<double> delta;
    if (!j.at("expected_delta").is_null()) delta = j.at("expected_delta").get<double>();
    return GroupSpec(j.at("name").get<std::string>(), n, std::move(gens),
                     j.at("integer_entries").get<bool>(), delta,
                     j.at("provenance").get<std::string>());
}

GroupSpec load_group_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open group file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return group_from_json(text);
}

void save_group_file(const GroupSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write group file: " + path);
    out << group_to_json(spec);
}

} // namespace chyp
