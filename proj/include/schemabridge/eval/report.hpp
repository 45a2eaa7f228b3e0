#pragma once

#include "schemabridge/eval/benchmark.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schemabridge {

/// A DIRECT/CODEGEN column pair; a side with no runs is empty.
struct StrategyPair {
    std::optional<double> direct;
    std::optional<double> codegen;
};

struct ModelSummary {
    std::string model;
    std::string provider;
    StrategyPair pass_at_1;
    StrategyPair value_accuracy;
    StrategyPair field_f1;
    StrategyPair mean_latency_s;
    StrategyPair p95_latency_s;  // nearest rank
    TokenUsage tokens;
    double total_cost_usd = 0.0;
    std::size_t runs = 0;
};

struct ScenarioSummary {
    int id = 0;
    std::string name;
    StrategyPair pass_at_1;
};

/// Safeguard lift: mean pass@1 with safeguards on minus mean pass@1 with
/// them off, per model and strategy.
struct LiftRow {
    std::string model;
    Strategy strategy = Strategy::Direct;
    std::optional<double> pass_on;
    std::optional<double> pass_off;
    std::optional<double> lift;
    double ensemble_rate = 0.0;  // among safeguarded runs
    double fallback_rate = 0.0;
};

struct ReportTables {
    std::vector<ModelSummary> models;
    std::optional<ModelSummary> mean;  // mean over models
    std::vector<ScenarioSummary> scenarios;
    StrategyPair scenario_mean;
    std::vector<LiftRow> lifts;
};

[[nodiscard]] ReportTables summarize(const BenchmarkReport& report);

/// Nearest-rank percentile; empty input gives nullopt.
[[nodiscard]] std::optional<double> percentile(std::vector<double> values, double p);

struct RenderedReport {
    std::string text;
    json document;
};

/// Text tables (cross-model, performance, per-scenario, safeguard lift)
/// and a JSON document carrying the same numbers plus every run.
[[nodiscard]] RenderedReport render_report(const BenchmarkReport& report);

} // namespace schemabridge
