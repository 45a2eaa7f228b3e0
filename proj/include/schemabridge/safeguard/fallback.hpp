#pragma once

#include "schemabridge/core/schema.hpp"
#include "schemabridge/safeguard/units.hpp"

#include <optional>
#include <vector>

namespace schemabridge {

struct FallbackPair {
    Path source;
    Path target;
    double score = 0.0;  // name similarity; 0 for pairs made by kind alone
};

/// Greedy pairing of target leaves to source leaves: highest normalised
/// name similarity first (cutoff 0.6, each source used once, ties broken
/// by target then source path), then each remaining target takes the only
/// remaining source leaf of a compatible kind, if there is exactly one.
[[nodiscard]] std::vector<FallbackPair> fallback_pairing(const Schema& source, const Schema& target);

/// Unit of a leaf from its x-unit hint, its description, or its name suffix.
[[nodiscard]] std::optional<std::string> leaf_unit(const Path& path, const SchemaNode& node);

/// Converts one scalar to the target leaf's kind ("21" -> 21, ISO 8601
/// text -> epoch seconds for integer targets). Null when impossible.
[[nodiscard]] json coerce_value(const json& value, const SchemaNode& target);

/// Value of the target kind used to fill an unmatched required leaf.
[[nodiscard]] json zero_value(const SchemaNode& node);

/// Deterministic, model-free transformation: pairing, unit conversion,
/// cardinality adjustment, type coercion, then zero-filling of required
/// leaves that are still absent. Never throws.
[[nodiscard]] json fallback_transform(const json& data, const Schema& source, const Schema& target,
                                      const UnitRegistry& units = UnitRegistry::builtin());

} // namespace schemabridge
