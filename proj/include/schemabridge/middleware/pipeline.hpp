#pragma once

#include "schemabridge/core/registry.hpp"
#include "schemabridge/detect/semantic.hpp"
#include "schemabridge/middleware/record.hpp"
#include "schemabridge/resolve/cache.hpp"
#include "schemabridge/resolve/resolver.hpp"
#include "schemabridge/safeguard/safeguards.hpp"

#include <memory>
#include <optional>

namespace schemabridge {

struct PipelineOptions {
    int ensemble_size = 3;
};

struct PipelineResult {
    json output;
    RequestRecord record;
    MismatchReport report;
    std::optional<ResolutionOutcome> resolution;  // empty when resolution failed
    std::string resolution_error;
    SafeguardedResult safeguards;
};

/// detect -> resolve -> safeguard for one registered route. The registry,
/// client and cache are shared by all requests; each call keeps its own
/// LLM session, so counts and timings are per request.
class Pipeline {
public:
    Pipeline(std::shared_ptr<const SchemaRegistry> registry, std::shared_ptr<const LlmClient> llm,
             std::shared_ptr<MappingCache> cache, PipelineOptions options = {});

    [[nodiscard]] PipelineResult process(const RouteConfig& route, const json& body) const;

    [[nodiscard]] const SchemaRegistry& registry() const noexcept { return *registry_; }
    [[nodiscard]] const LlmClient& llm() const noexcept { return *llm_; }
    [[nodiscard]] MappingCache& cache() const noexcept { return *cache_; }
    [[nodiscard]] const UnitRegistry& units() const noexcept { return units_; }

private:
    [[nodiscard]] MismatchReport detect(const RouteConfig& route, LlmSession& session, bool& degraded) const;

    std::shared_ptr<const SchemaRegistry> registry_;
    std::shared_ptr<const LlmClient> llm_;
    std::shared_ptr<MappingCache> cache_;
    PipelineOptions options_;
    UnitRegistry units_;
};

} // namespace schemabridge
