#pragma once

#include "schemabridge/core/schema.hpp"

#include <string>
#include <vector>

namespace schemabridge {

struct Violation {
    Path path;
    std::string reason;
};

/// Checks `instance` against the supported keyword subset (type, required,
/// properties, items, enum). Integral floats satisfy "integer"; unknown
/// properties are allowed.
[[nodiscard]] std::vector<Violation> validate_instance(const json& instance, const Schema& schema);
[[nodiscard]] std::vector<Violation> validate_instance(const json& instance, const SchemaNode& node);

[[nodiscard]] bool matches_kind(const json& value, Kind kind);

} // namespace schemabridge
