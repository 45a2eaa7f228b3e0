#pragma once

#include "schemabridge/core/registry.hpp"
#include "schemabridge/detect/mismatch.hpp"
#include "schemabridge/llm/client.hpp"
#include "schemabridge/resolve/adapter.hpp"
#include "schemabridge/resolve/cache.hpp"
#include "schemabridge/resolve/mapping.hpp"

#include <exception>
#include <string>

namespace schemabridge {

/// Resolution could not produce an output; `cause` holds the original error.
class ResolutionFailure : public Error {
public:
    ResolutionFailure(std::string stage, std::exception_ptr cause, const std::string& what)
        : Error(stage + ": " + what), stage_(std::move(stage)), cause_(std::move(cause)) {}

    [[nodiscard]] const std::string& stage() const noexcept { return stage_; }
    [[nodiscard]] std::exception_ptr cause() const noexcept { return cause_; }

private:
    std::string stage_;
    std::exception_ptr cause_;
};

struct ResolutionOutcome {
    json output;
    Strategy strategy = Strategy::Codegen;
    int llm_calls = 0;
    bool cache_hit = false;
    SchemaMapping mapping;
};

/// One model call. Entries are normalised: only target leaves, one entry
/// per target. Throws LlmFailure.
[[nodiscard]] SchemaMapping generate_mapping(LlmSession& llm, const Schema& source, const Schema& target,
                                             const MismatchReport& report);

/// One model call returning the transformed object; not validated here.
/// Throws LlmFailure.
[[nodiscard]] json transform_direct(LlmSession& llm, const SchemaMapping& mapping, const json& data);

/// One model call returning an adapter program. Throws LlmFailure.
[[nodiscard]] AdapterProgram generate_adapter(LlmSession& llm, const Schema& source, const Schema& target,
                                              const SchemaMapping& mapping);

/// Produces the output for the route's strategy from a given mapping:
/// DIRECT transforms through the model, CODEGEN generates, validates and
/// runs an adapter. Returns the validated adapter for CODEGEN.
struct StrategyRun {
    json output;
    std::shared_ptr<const ValidatedAdapter> adapter;
};
[[nodiscard]] StrategyRun run_strategy(const RouteConfig& route, const SchemaMapping& mapping, const json& data,
                                       LlmSession& llm);

/// DIRECT: cached mapping plus a per-request transform call.
/// CODEGEN: cached mapping and adapter, then local execution.
/// Throws ResolutionFailure.
[[nodiscard]] ResolutionOutcome resolve(const RouteConfig& route, const json& data, const MismatchReport& report,
                                        LlmSession& llm, MappingCache& cache);

} // namespace schemabridge
