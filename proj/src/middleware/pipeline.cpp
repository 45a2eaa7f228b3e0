#include "schemabridge/middleware/pipeline.hpp"

#include <chrono>

namespace schemabridge {

std::string_view to_string(Outcome o) {
    switch (o) {
    case Outcome::Transformed: return "transformed";
    case Outcome::Passthrough: return "passthrough";
    case Outcome::Degraded: return "degraded";
    case Outcome::Rejected: return "rejected";
    }
    return "passthrough";
}

json to_json(const RequestRecord& r) {
    return {{"route", r.route},
            {"method", r.method},
            {"path", r.path},
            {"timestamp_ms", r.timestamp_ms},
            {"detect_ms", r.detect_ms},
            {"resolve_ms", r.resolve_ms},
            {"safeguard_ms", r.safeguard_ms},
            {"llm_calls", r.llm_calls},
            {"input_tokens", r.tokens.input_tokens},
            {"output_tokens", r.tokens.output_tokens},
            {"cost_usd", r.cost_usd},
            {"tier_used", to_string(r.tier_used)},
            {"cache_hit", r.cache_hit},
            {"ensemble_triggered", r.ensemble_triggered},
            {"fallback_triggered", r.fallback_triggered},
            {"semantic_degraded", r.semantic_degraded},
            {"outcome", to_string(r.outcome)},
            {"status", r.status},
            {"error", r.error}};
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Thrown out of the cache computation so that a report built without the
// semantic half is used once but never cached.
struct DegradedDetection {
    MismatchReport report;
};

} // namespace

Pipeline::Pipeline(std::shared_ptr<const SchemaRegistry> registry, std::shared_ptr<const LlmClient> llm,
                   std::shared_ptr<MappingCache> cache, PipelineOptions options)
    : registry_(std::move(registry)), llm_(std::move(llm)), cache_(std::move(cache)), options_(options),
      units_(UnitRegistry::builtin()) {
    if (!registry_ || !llm_ || !cache_) throw ConfigError("pipeline needs a registry, an LLM client and a cache");
    for (const auto& u : registry_->units) units_.add(u);
}

MismatchReport Pipeline::detect(const RouteConfig& route, LlmSession& session, bool& degraded) const {
    try {
        return *cache_->reports
                    .get_or_compute(route.schema_pair(),
                                    [&] {
                                        MismatchReport structural =
                                            detect_structural(*route.source_schema, *route.target_schema);
                                        SemanticResult semantic =
                                            detect_semantic(session, *route.source_schema, *route.target_schema);
                                        if (semantic.degraded) throw DegradedDetection{std::move(structural)};
                                        return merge_reports(structural, semantic.report);
                                    })
                    .value;
    } catch (DegradedDetection& d) {
        degraded = true;
        return std::move(d.report);
    }
}

PipelineResult Pipeline::process(const RouteConfig& route, const json& body) const {
    PipelineResult result;
    RequestRecord& rec = result.record;
    rec.route = route.path_pattern;
    rec.timestamp_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::system_clock::now().time_since_epoch())
                           .count();
    LlmSession session(*llm_);

    auto t = Clock::now();
    result.report = detect(route, session, rec.semantic_degraded);
    rec.detect_ms = ms_since(t);

    t = Clock::now();
    try {
        result.resolution = resolve(route, body, result.report, session, *cache_);
        rec.cache_hit = result.resolution->cache_hit;
    } catch (const ResolutionFailure& e) {
        result.resolution_error = e.what();
    }
    rec.resolve_ms = ms_since(t);

    t = Clock::now();
    if (route.safeguards_enabled) {
        SafeguardContext ctx;
        ctx.route = &route;
        ctx.data = &body;
        ctx.report = &result.report;
        ctx.llm = &session;
        ctx.cache = cache_.get();
        ctx.units = &units_;
        ctx.ensemble_size = options_.ensemble_size;
        result.safeguards = run_safeguards(result.resolution ? &*result.resolution : nullptr, ctx);
        result.output = result.safeguards.output;
        rec.outcome = Outcome::Transformed;
        if (!result.safeguards.ensemble_error.empty()) rec.error = result.safeguards.ensemble_error;
        else if (!result.resolution_error.empty()) rec.error = result.resolution_error;
    } else if (result.resolution) {
        result.output = result.resolution->output;
        rec.outcome = Outcome::Transformed;
    } else {
        result.output = body;
        rec.outcome = Outcome::Degraded;
        rec.error = result.resolution_error;
    }
    rec.safeguard_ms = ms_since(t);

    rec.tier_used = result.safeguards.tier_used;
    rec.ensemble_triggered = result.safeguards.ensemble_triggered;
    rec.fallback_triggered = result.safeguards.fallback_triggered;
    rec.llm_calls = session.calls();
    rec.tokens = session.usage();
    rec.cost_usd = estimate_cost(rec.tokens, llm_->profile());
    return result;
}

} // namespace schemabridge
