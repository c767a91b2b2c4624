#pragma once

#include <string>

#include "chyp/groups.hpp"

namespace chyp {

// JSON schema: {name, n, generators: [[re,im] matrices], integer_entries,
// expected_delta, provenance}. Numbers round-trip bit-exactly (shortest
// round-trip decimal). Unknown fields are rejected on load.
std::string group_to_json(const GroupSpec& spec);
GroupSpec group_from_json(const std::string& text);

GroupSpec load_group_file(const std::string& path);
void save_group_file(const GroupSpec& spec, const std::string& path);

} // namespace chyp
