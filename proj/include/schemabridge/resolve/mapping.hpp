#pragma once

#include "schemabridge/resolve/adapter.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schemabridge {

struct FieldMapping {
    std::optional<Path> source_path;  // empty for constant-filled targets
    Path target_path;
    std::string transform;  // adapter-language text; `$` is the source value
    double confidence = 1.0;

    friend bool operator==(const FieldMapping&, const FieldMapping&) = default;
};

struct SchemaMapping {
    SchemaPair pair;
    std::vector<FieldMapping> fields;

    [[nodiscard]] double min_confidence() const;
    [[nodiscard]] const FieldMapping* for_target(const Path& target) const;
};

[[nodiscard]] json to_json(const FieldMapping& f);
/// Contract form: {"mappings":[{"source_path":...,"target_path":...,"transform":...,"confidence":...}]}
[[nodiscard]] json to_json(const SchemaMapping& m);

/// Parses the contract form; structural problems (bad types, confidence
/// outside [0,1], transform that does not parse) throw ContractViolation.
[[nodiscard]] SchemaMapping mapping_from_json(const json& j, const SchemaPair& pair);

/// Drops entries whose target is not a target leaf and keeps one entry per
/// target (highest confidence, first on ties).
void normalize_mapping(SchemaMapping& mapping, const Schema& target);

/// Identity mapping over the common leaves of the two schemas.
[[nodiscard]] SchemaMapping identity_mapping(const Schema& source, const Schema& target);

/// One assignment per mapping entry, compiled from the transform text.
/// Throws ExprSyntaxError.
[[nodiscard]] AdapterProgram compile_mapping(const SchemaMapping& mapping);

} // namespace schemabridge
