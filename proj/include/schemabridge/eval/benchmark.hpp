#pragma once

#include "schemabridge/core/registry.hpp"
#include "schemabridge/eval/fixture.hpp"
#include "schemabridge/eval/metrics.hpp"
#include "schemabridge/llm/client.hpp"
#include "schemabridge/safeguard/safeguards.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace schemabridge {

struct RunResult {
    std::string model;
    std::string provider;
    int scenario_id = 0;
    std::string scenario;
    Strategy strategy = Strategy::Direct;
    bool safeguards = false;
    int run = 1;
    bool pass = false;
    double field_f1 = 0.0;
    double value_accuracy = 0.0;
    double detection_precision = 0.0;
    double detection_recall = 0.0;
    double detect_ms = 0.0;
    double resolve_ms = 0.0;
    double safeguard_ms = 0.0;
    int llm_calls = 0;
    TokenUsage tokens;
    double cost_usd = 0.0;
    Tier tier_used = Tier::None;
    bool ensemble_triggered = false;
    bool fallback_triggered = false;
    std::string error;
    std::vector<std::string> diffs;

    [[nodiscard]] double latency_ms() const noexcept { return detect_ms + resolve_ms + safeguard_ms; }
};

[[nodiscard]] json to_json(const RunResult& r);

struct BenchmarkReport {
    std::vector<RunResult> runs;
};

/// One model under test: its profile and a factory for its backend. A
/// fresh client is built per run so no state leaks between runs.
struct BenchmarkModel {
    ModelProfile profile;
    std::shared_ptr<LlmBackend> backend;
};

struct BenchmarkConfig {
    std::vector<Strategy> strategies{Strategy::Direct, Strategy::Codegen};
    std::vector<bool> safeguard_modes{true, false};
    int runs = 3;
    double epsilon = kDefaultEpsilon;
    int ensemble_size = 3;
    bool parallel = false;  // scenarios concurrently; meant for offline backends
    /// Called after every run, e.g. for progress output.
    std::function<void(const RunResult&)> on_run;
};

/// Runs every scenario x strategy x safeguard mode x run for each model.
/// The mapping cache starts empty for every run. A failing scenario is
/// recorded with pass=false and the benchmark continues.
[[nodiscard]] BenchmarkReport run_benchmark(const BenchmarkConfig& config, const std::vector<ScenarioFixture>& fixtures,
                                            const std::vector<BenchmarkModel>& models, const PromptSet& prompts);

} // namespace schemabridge
