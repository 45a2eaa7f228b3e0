#include "schemabridge/eval/benchmark.hpp"

#include "schemabridge/middleware/pipeline.hpp"

#include <future>

namespace schemabridge {

json to_json(const RunResult& r) {
    return {{"model", r.model},
            {"provider", r.provider},
            {"scenario_id", r.scenario_id},
            {"scenario", r.scenario},
            {"strategy", to_string(r.strategy)},
            {"safeguards", r.safeguards},
            {"run", r.run},
            {"pass", r.pass},
            {"field_f1", r.field_f1},
            {"value_accuracy", r.value_accuracy},
            {"detection_precision", r.detection_precision},
            {"detection_recall", r.detection_recall},
            {"latency_ms", {{"detect", r.detect_ms}, {"resolve", r.resolve_ms}, {"safeguard", r.safeguard_ms}}},
            {"llm_calls", r.llm_calls},
            {"input_tokens", r.tokens.input_tokens},
            {"output_tokens", r.tokens.output_tokens},
            {"cost_usd", r.cost_usd},
            {"tier_used", to_string(r.tier_used)},
            {"ensemble_triggered", r.ensemble_triggered},
            {"fallback_triggered", r.fallback_triggered},
            {"error", r.error},
            {"diffs", r.diffs}};
}

namespace {

RunResult run_once(const BenchmarkConfig& config, const ScenarioFixture& fixture, const BenchmarkModel& model,
                   const PromptSet& prompts, Strategy strategy, bool safeguards, int run) {
    RunResult r;
    r.model = model.profile.name;
    r.provider = model.profile.provider;
    r.scenario_id = fixture.id;
    r.scenario = fixture.name;
    r.strategy = strategy;
    r.safeguards = safeguards;
    r.run = run;
    try {
        RouteConfig route;
        route.path_pattern = "/bench/" + fixture.slug;
        route.methods = {Method::Post};
        route.source_schema = fixture.source_schema;
        route.target_schema = fixture.target_schema;
        route.source_service = "bench-client";
        route.target_service = "bench-backend";
        route.strategy = strategy;
        route.safeguards_enabled = safeguards;

        auto registry = std::make_shared<SchemaRegistry>();
        registry->add(route);
        auto client = std::make_shared<const LlmClient>(model.backend, model.profile, prompts);
        const Pipeline pipeline(registry, client, std::make_shared<MappingCache>(),
                                PipelineOptions{config.ensemble_size});
        const PipelineResult out = pipeline.process(registry->routes.front(), fixture.input);

        const Comparison cmp = compare_outputs(out.output, fixture.golden, config.epsilon);
        r.pass = cmp.pass;
        r.diffs = cmp.diffs;
        r.field_f1 = field_f1(out.output, fixture.golden);
        r.value_accuracy = value_accuracy(out.output, fixture.golden, config.epsilon);
        const PrecisionRecall pr = detection_prf(out.report, fixture.expected_mismatches);
        r.detection_precision = pr.precision;
        r.detection_recall = pr.recall;
        r.detect_ms = out.record.detect_ms;
        r.resolve_ms = out.record.resolve_ms;
        r.safeguard_ms = out.record.safeguard_ms;
        r.llm_calls = out.record.llm_calls;
        r.tokens = out.record.tokens;
        r.cost_usd = out.record.cost_usd;
        r.tier_used = out.record.tier_used;
        r.ensemble_triggered = out.record.ensemble_triggered;
        r.fallback_triggered = out.record.fallback_triggered;
        r.error = out.record.error;
    } catch (const std::exception& e) {
        r.pass = false;
        r.error = e.what();
    }
    return r;
}

} // namespace

BenchmarkReport run_benchmark(const BenchmarkConfig& config, const std::vector<ScenarioFixture>& fixtures,
                              const std::vector<BenchmarkModel>& models, const PromptSet& prompts) {
    BenchmarkReport report;
    for (const auto& model : models) {
        if (!model.backend) throw ConfigError("benchmark model " + model.profile.name + " has no backend");
        // One task per scenario; runs inside a scenario stay sequential.
        auto scenario_runs = [&](const ScenarioFixture& fixture) {
            std::vector<RunResult> out;
            for (Strategy strategy : config.strategies) {
                for (bool safeguards : config.safeguard_modes) {
                    for (int run = 1; run <= config.runs; ++run) {
                        out.push_back(run_once(config, fixture, model, prompts, strategy, safeguards, run));
                    }
                }
            }
            return out;
        };
        std::vector<std::vector<RunResult>> per_scenario;
        if (config.parallel) {
            std::vector<std::future<std::vector<RunResult>>> tasks;
            for (const auto& f : fixtures) tasks.push_back(std::async(std::launch::async, scenario_runs, std::cref(f)));
            for (auto& t : tasks) per_scenario.push_back(t.get());
        } else {
            for (const auto& f : fixtures) per_scenario.push_back(scenario_runs(f));
        }
        for (auto& runs : per_scenario) {
            for (auto& r : runs) {
                if (config.on_run) config.on_run(r);
                report.runs.push_back(std::move(r));
            }
        }
    }
    return report;
}

} // namespace schemabridge
