#pragma once

#include "schemabridge/core/registry.hpp"
#include "schemabridge/core/schema.hpp"
#include "schemabridge/eval/fixture.hpp"
#include "schemabridge/llm/client.hpp"
#include "schemabridge/llm/mock_backend.hpp"
#include "schemabridge/llm/profile.hpp"
#include "schemabridge/llm/prompts.hpp"
#include "schemabridge/middleware/pipeline.hpp"
#include "schemabridge/resolve/cache.hpp"

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace schemabridge::test {

inline std::filesystem::path data_dir() { return SCHEMABRIDGE_DATA_DIR; }
inline std::filesystem::path scenarios_dir() { return data_dir() / "scenarios"; }

inline const std::vector<ScenarioFixture>& fixtures() {
    static const auto all = load_fixtures(scenarios_dir());
    return all;
}

inline const ScenarioFixture& fixture(int id) { return fixtures().at(static_cast<std::size_t>(id - 1)); }

inline const PromptSet& prompts() {
    static const auto p = load_prompts(data_dir() / "prompts");
    return p;
}

inline Schema schema(const json& document) { return schema_from_json(document); }

inline RouteConfig route_for(const ScenarioFixture& f, Strategy strategy, bool safeguards = true) {
    RouteConfig r;
    r.path_pattern = "/s/" + f.slug;
    r.methods = {Method::Post, Method::Put, Method::Patch};
    r.source_schema = f.source_schema;
    r.target_schema = f.target_schema;
    r.target_service = "backend";
    r.strategy = strategy;
    r.safeguards_enabled = safeguards;
    return r;
}

/// Mock backend loaded with every scenario, plus client, cache and pipeline
/// over one route per scenario.
struct MockStack {
    std::shared_ptr<MockBackend> mock;
    std::shared_ptr<const LlmClient> client;
    std::shared_ptr<MappingCache> cache;
    std::shared_ptr<SchemaRegistry> registry;
    std::shared_ptr<const Pipeline> pipeline;

    explicit MockStack(Strategy strategy, bool safeguards = true, MockMode mode = MockMode::faithful(),
                       std::uint64_t seed = 42) {
        mock = std::make_shared<MockBackend>(mode, seed);
        mock->load_fixtures(scenarios_dir());
        client = std::make_shared<const LlmClient>(mock, mock_profile(), prompts());
        cache = std::make_shared<MappingCache>();
        registry = std::make_shared<SchemaRegistry>();
        for (const auto& f : fixtures()) registry->add(route_for(f, strategy, safeguards));
        pipeline = std::make_shared<const Pipeline>(registry, client, cache);
    }

    [[nodiscard]] const RouteConfig& route(int id) const {
        return registry->routes.at(static_cast<std::size_t>(id - 1));
    }
};

/// Random object schema over a small name pool, so independently drawn
/// schemas share names and structure often.
inline json random_schema_doc(std::mt19937& rng, int depth = 0) {
    static const std::vector<std::string> names{"id", "name", "temp", "speed", "tags", "code", "level", "ts", "meta"};
    static const std::vector<std::string> scalars{"string", "number", "integer", "boolean"};
    json props = json::object();
    json required = json::array();
    const int n = std::uniform_int_distribution<int>(depth == 0 ? 1 : 0, 4)(rng);
    for (int i = 0; i < n; ++i) {
        const std::string name = names[rng() % names.size()];
        if (props.contains(name)) continue;
        const int pick = std::uniform_int_distribution<int>(0, 9)(rng);
        json node;
        if (pick < 6 || depth >= 2) {
            node = {{"type", scalars[rng() % scalars.size()]}};
        } else if (pick < 8) {
            node = random_schema_doc(rng, depth + 1);
        } else if (pick < 9) {
            node = {{"type", "array"}, {"items", {{"type", scalars[rng() % scalars.size()]}}}};
        } else {
            node = {{"type", "array"}, {"items", random_schema_doc(rng, depth + 1)}};
        }
        props[name] = node;
        if (rng() % 2) required.push_back(name);
    }
    return {{"type", "object"}, {"properties", props}, {"required", required}};
}

/// Random instance satisfying `node`; optional properties appear half the time.
inline json random_instance(std::mt19937& rng, const SchemaNode& node) {
    switch (node.kind) {
    case Kind::Object: {
        json out = json::object();
        for (const auto& p : node.properties) {
            if (node.is_required(p.name) || rng() % 2) out[p.name] = random_instance(rng, *p.node);
        }
        return out;
    }
    case Kind::Array: {
        json out = json::array();
        const int n = static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) out.push_back(random_instance(rng, *node.items));
        return out;
    }
    case Kind::String: return std::string(1 + rng() % 6, static_cast<char>('a' + rng() % 26));
    case Kind::Number: return std::uniform_real_distribution<double>(-1000.0, 1000.0)(rng);
    case Kind::Integer: return std::uniform_int_distribution<int>(-1000, 1000)(rng);
    case Kind::Boolean: return rng() % 2 == 0;
    case Kind::Null: return nullptr;
    }
    return nullptr;
}

} // namespace schemabridge::test
