#include "schemabridge/safeguard/safeguards.hpp"

#include "schemabridge/safeguard/ensemble.hpp"
#include "schemabridge/safeguard/fallback.hpp"

namespace schemabridge {

ValidationResult validate_output(const json& output, const Schema& target, double min_confidence,
                                 const SchemaMapping& mapping) {
    ValidationResult r;
    r.violations = validate_instance(output, target);
    r.valid = r.violations.empty();
    r.confidence_ok = mapping.min_confidence() >= min_confidence;
    return r;
}

std::string_view to_string(Tier t) {
    switch (t) {
    case Tier::None: return "none";
    case Tier::Ensemble: return "ensemble";
    case Tier::Fallback: return "fallback";
    }
    return "none";
}

SafeguardedResult run_safeguards(const ResolutionOutcome* outcome, const SafeguardContext& ctx) {
    const RouteConfig& route = *ctx.route;
    const Schema& source = *route.source_schema;
    const Schema& target = *route.target_schema;
    const json& data = *ctx.data;

    SafeguardedResult result;
    if (outcome) {
        result.validation = validate_output(outcome->output, target, route.min_confidence, outcome->mapping);
        if (result.validation.passed()) {
            result.output = outcome->output;
            return result;
        }
    }

    result.ensemble_triggered = true;
    try {
        if (!ctx.llm) throw EnsembleFailure("no LLM available");
        const MismatchReport empty{route.schema_pair(), {}};
        SchemaMapping mapping = ensemble_vote(*ctx.llm, source, target, ctx.report ? *ctx.report : empty,
                                              ctx.ensemble_size);
        StrategyRun run = run_strategy(route, mapping, data, *ctx.llm);
        const ValidationResult check = validate_output(run.output, target, route.min_confidence, mapping);
        if (check.passed()) {
            if (ctx.cache) {
                const auto pair = route.schema_pair();
                ctx.cache->mappings.put(pair, MappingRecord{mapping, std::chrono::system_clock::now()});
                if (run.adapter) ctx.cache->adapters.put(pair, *run.adapter);
            }
            result.output = std::move(run.output);
            result.tier_used = Tier::Ensemble;
            return result;
        }
        result.ensemble_error = check.valid ? "ensemble mapping below confidence floor"
                                            : "ensemble output failed validation: " + check.violations.front().path.str() +
                                                  " " + check.violations.front().reason;
    } catch (const std::exception& e) {
        result.ensemble_error = e.what();
    }

    result.fallback_triggered = true;
    result.tier_used = Tier::Fallback;
    result.output = fallback_transform(data, source, target, ctx.units ? *ctx.units : UnitRegistry::builtin());
    return result;
}

} // namespace schemabridge
