#pragma once

#include "schemabridge/core/schema.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace schemabridge {

enum class Method { Post, Put, Patch };
enum class Strategy { Direct, Codegen };

[[nodiscard]] std::optional<Method> method_from_string(std::string_view text);
[[nodiscard]] std::string_view to_string(Method m);
[[nodiscard]] std::string_view to_string(Strategy s);
[[nodiscard]] std::optional<Strategy> strategy_from_string(std::string_view text);

/// Extra affine unit conversion declared in the registry config.
struct UnitDefinition {
    std::string from;
    std::string to;
    double scale = 1.0;
    double offset = 0.0;
};

struct RouteConfig {
    std::string path_pattern;
    std::set<Method> methods;
    std::shared_ptr<const Schema> source_schema;
    std::shared_ptr<const Schema> target_schema;
    std::string source_service;
    std::string target_service;  // host:port of the backend
    Strategy strategy = Strategy::Codegen;
    bool safeguards_enabled = true;
    double min_confidence = 0.7;

    [[nodiscard]] SchemaPair schema_pair() const { return {source_schema->hash(), target_schema->hash()}; }
};

/// Immutable after load; safe to share between request handlers.
struct SchemaRegistry {
    std::vector<RouteConfig> routes;
    std::vector<UnitDefinition> units;

    /// Throws ConfigError if (pattern, method) is already registered.
    void add(RouteConfig route);
};

/// Exact match beats prefix match; otherwise the longest registered pattern
/// that prefixes `path` on a segment boundary. Only routes accepting
/// `method` are candidates. The query string is ignored.
[[nodiscard]] const RouteConfig* match_route(const SchemaRegistry& registry, std::string_view method,
                                             std::string_view path);

/// Loads the registry config document. Schema values may be inline objects
/// or file paths resolved against `base_dir`. Throws ConfigError naming
/// the offending route.
[[nodiscard]] SchemaRegistry load_registry(const json& document, const std::filesystem::path& base_dir = {});
[[nodiscard]] SchemaRegistry load_registry_file(const std::filesystem::path& file);

} // namespace schemabridge
