#include "schemabridge/resolve/resolver.hpp"

#include "schemabridge/resolve/builtins.hpp"

namespace schemabridge {

SchemaMapping generate_mapping(LlmSession& llm, const Schema& source, const Schema& target,
                               const MismatchReport& report) {
    const SchemaPair pair{source.hash(), target.hash()};
    if (report.pair != pair) throw PairMismatch("mismatch report belongs to another schema pair");
    const PromptVars vars{{"source_schema", source.document().dump(2)},
                          {"target_schema", target.document().dump(2)},
                          {"mismatch_report", to_json(report).dump(2)}};
    json context = {{"source_schema", source.document()},
                    {"target_schema", target.document()},
                    {"mismatch_report", to_json(report)}};
    auto done = llm.complete_structured(ContractKind::SchemaMapping,
                                        render_prompt(llm.client().prompts().generate_mapping, vars), pair,
                                        std::move(context), [&](const json& j) {
                                            SchemaMapping m = mapping_from_json(j, pair);
                                            normalize_mapping(m, target);
                                            return m;
                                        });
    return std::move(done.value);
}

json transform_direct(LlmSession& llm, const SchemaMapping& mapping, const json& data) {
    const json mapping_doc = to_json(mapping);
    const PromptVars vars{{"mapping", mapping_doc.dump(2)}, {"data", data.dump(2)}};
    json context = {{"mapping", mapping_doc}, {"data", data}};
    auto done = llm.complete_structured(ContractKind::TransformedData,
                                        render_prompt(llm.client().prompts().transform_data, vars), mapping.pair,
                                        std::move(context), [](const json& j) {
                                            const auto it = j.find("data");
                                            if (it == j.end() || !it->is_object())
                                                throw ContractViolation("TransformedData: \"data\" must be an object");
                                            return *it;
                                        });
    return std::move(done.value);
}

AdapterProgram generate_adapter(LlmSession& llm, const Schema& source, const Schema& target,
                                const SchemaMapping& mapping) {
    const json mapping_doc = to_json(mapping);
    const PromptVars vars{{"source_schema", source.document().dump(2)},
                          {"target_schema", target.document().dump(2)},
                          {"mapping", mapping_doc.dump(2)}};
    json context = {{"source_schema", source.document()}, {"target_schema", target.document()}, {"mapping", mapping_doc}};
    auto done = llm.complete_structured(ContractKind::AdapterProgram,
                                        render_prompt(llm.client().prompts().generate_adapter, vars), mapping.pair,
                                        std::move(context), [](const json& j) {
                                            try {
                                                return adapter_from_json(j);
                                            } catch (const ExprSyntaxError& e) {
                                                throw ContractViolation(std::string("AdapterProgram: ") + e.what());
                                            }
                                        });
    return std::move(done.value);
}

namespace {

template <class F>
auto staged(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ResolutionFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw ResolutionFailure(stage, std::current_exception(), e.what());
    }
}

ValidatedAdapter build_adapter(const RouteConfig& route, const SchemaMapping& mapping, const json& data,
                               LlmSession& llm) {
    AdapterProgram program =
        staged("adapter", [&] { return generate_adapter(llm, *route.source_schema, *route.target_schema, mapping); });
    return staged("adapter validation", [&] {
        return validate_adapter(std::move(program), *route.source_schema, *route.target_schema, data);
    });
}

} // namespace

StrategyRun run_strategy(const RouteConfig& route, const SchemaMapping& mapping, const json& data, LlmSession& llm) {
    if (route.strategy == Strategy::Direct) {
        return {staged("transform", [&] { return transform_direct(llm, mapping, data); }), nullptr};
    }
    auto adapter = std::make_shared<const ValidatedAdapter>(build_adapter(route, mapping, data, llm));
    json output = staged("execute", [&] { return execute_adapter(*adapter, data); });
    return {std::move(output), std::move(adapter)};
}

ResolutionOutcome resolve(const RouteConfig& route, const json& data, const MismatchReport& report, LlmSession& llm,
                          MappingCache& cache) {
    if (!data.is_object()) throw ResolutionFailure("input", nullptr, "request body is not a JSON object");
    const int calls_before = llm.calls();
    const SchemaPair pair = route.schema_pair();

    ResolutionOutcome outcome;
    outcome.strategy = route.strategy;
    const auto mapping = staged("mapping", [&] {
        return cache.mappings.get_or_compute(pair, [&] {
            return MappingRecord{generate_mapping(llm, *route.source_schema, *route.target_schema, report),
                                 std::chrono::system_clock::now()};
        });
    });
    outcome.mapping = mapping.value->mapping;

    if (route.strategy == Strategy::Direct) {
        outcome.output = staged("transform", [&] { return transform_direct(llm, outcome.mapping, data); });
        outcome.cache_hit = mapping.hit;
    } else {
        const auto adapter = staged("adapter", [&] {
            return cache.adapters.get_or_compute(pair, [&] { return build_adapter(route, outcome.mapping, data, llm); });
        });
        outcome.output = staged("execute", [&] { return execute_adapter(*adapter.value, data); });
        outcome.cache_hit = mapping.hit && adapter.hit;
    }
    outcome.llm_calls = llm.calls() - calls_before;
    return outcome;
}

} // namespace schemabridge
