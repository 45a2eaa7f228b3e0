#include "schemabridge/eval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace schemabridge {

namespace {

constexpr const char* kLiveNote =
    "Commercial model results are not reproducible: hosted models change over time and sample "
    "non-deterministically even at temperature 0.";

bool has_live_models(const BenchmarkReport& report) {
    return std::any_of(report.runs.begin(), report.runs.end(), [](const RunResult& r) { return r.provider != "mock"; });
}

struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double v) {
        sum += v;
        ++n;
    }
    [[nodiscard]] std::optional<double> mean() const {
        return n == 0 ? std::nullopt : std::optional<double>(sum / static_cast<double>(n));
    }
};

StrategyPair pair_of(const Acc& d, const Acc& c) { return {d.mean(), c.mean()}; }

std::optional<double> mean_of(const std::vector<std::optional<double>>& values) {
    Acc a;
    for (const auto& v : values) {
        if (v) a.add(*v);
    }
    return a.mean();
}

StrategyPair mean_pair(const std::vector<ModelSummary>& models, StrategyPair ModelSummary::*field) {
    std::vector<std::optional<double>> d, c;
    for (const auto& m : models) {
        d.push_back((m.*field).direct);
        c.push_back((m.*field).codegen);
    }
    return {mean_of(d), mean_of(c)};
}

ModelSummary summarize_model(const std::string& model, const std::vector<const RunResult*>& runs) {
    ModelSummary s;
    s.model = model;
    s.provider = runs.empty() ? "" : runs.front()->provider;
    s.runs = runs.size();
    Acc pass[2], value[2], f1[2], latency[2];
    std::vector<double> lat[2];
    for (const RunResult* r : runs) {
        const int k = r->strategy == Strategy::Direct ? 0 : 1;
        pass[k].add(r->pass ? 1.0 : 0.0);
        value[k].add(r->value_accuracy);
        f1[k].add(r->field_f1);
        latency[k].add(r->latency_ms() / 1000.0);
        lat[k].push_back(r->latency_ms() / 1000.0);
        s.tokens += r->tokens;
        s.total_cost_usd += r->cost_usd;
    }
    s.pass_at_1 = pair_of(pass[0], pass[1]);
    s.value_accuracy = pair_of(value[0], value[1]);
    s.field_f1 = pair_of(f1[0], f1[1]);
    s.mean_latency_s = pair_of(latency[0], latency[1]);
    s.p95_latency_s = {percentile(lat[0], 95.0), percentile(lat[1], 95.0)};
    return s;
}

std::string fixed(std::optional<double> v, int digits) {
    if (!v) return "-";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, *v);
    return buf;
}

// Seconds keep one decimal like the published tables once they exceed a
// second; offline runs need more digits to show anything.
int latency_digits(std::optional<double> v) { return v && *v >= 1.0 ? 1 : 3; }

std::string seconds(std::optional<double> v) { return fixed(v, latency_digits(v)); }

std::string dollars(double v) { return "$" + fixed(v, 2); }

std::string thousands(std::int64_t tokens) {
    const bool kilo = tokens >= 1000;
    std::string digits = std::to_string(kilo ? (tokens + 500) / 1000 : tokens);
    for (int i = static_cast<int>(digits.size()) - 3; i > 0; i -= 3) digits.insert(static_cast<std::size_t>(i), ",");
    return kilo ? digits + "K" : digits;
}

json opt(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

json pair_json(const StrategyPair& p) { return {{"D", opt(p.direct)}, {"C", opt(p.codegen)}}; }

class Table {
public:
    /// The first `left_columns` columns are left-aligned, the rest right-aligned.
    Table(std::vector<std::string> header, std::size_t left_columns) : left_(left_columns) {
        rows_.push_back(std::move(header));
    }
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    void rule() { rules_.push_back(rows_.size()); }

    /// `groups` is an optional spanning header line: (first column, span, label).
    [[nodiscard]] std::string render(const std::vector<std::tuple<std::size_t, std::size_t, std::string>>& groups = {}) const {
        std::vector<std::size_t> width(rows_.front().size(), 0);
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
        }
        for (const auto& [first, span, label] : groups) {
            std::size_t w = 3 * (span - 1);
            for (std::size_t i = first; i < first + span; ++i) w += width[i];
            if (label.size() <= w) continue;
            const std::size_t extra = label.size() - w;
            for (std::size_t i = 0; i < span; ++i) width[first + i] += extra / span + (i < extra % span ? 1 : 0);
        }
        std::ostringstream out;
        const auto line = [&] {
            out << '+';
            for (auto w : width) out << std::string(w + 2, '-') << '+';
            out << '\n';
        };
        line();
        if (!groups.empty()) {
            out << '|';
            std::size_t col = 0;
            for (const auto& [first, span, label] : groups) {
                for (; col < first; ++col) out << std::string(width[col] + 2, ' ') << '|';
                std::size_t w = 3 * (span - 1);
                for (std::size_t i = first; i < first + span; ++i) w += width[i];
                const std::size_t left = (w - label.size()) / 2;
                out << ' ' << std::string(left, ' ') << label << std::string(w - label.size() - left, ' ') << " |";
                col = first + span;
            }
            for (; col < width.size(); ++col) out << std::string(width[col] + 2, ' ') << '|';
            out << '\n';
        }
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (r == 1 || std::find(rules_.begin(), rules_.end(), r) != rules_.end()) line();
            out << '|';
            for (std::size_t i = 0; i < width.size(); ++i) {
                const std::string& cell = i < rows_[r].size() ? rows_[r][i] : std::string();
                if (i < left_) out << ' ' << cell << std::string(width[i] - cell.size(), ' ') << " |";
                else out << ' ' << std::string(width[i] - cell.size(), ' ') << cell << " |";
            }
            out << '\n';
        }
        line();
        return out.str();
    }

private:
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::size_t> rules_;
    std::size_t left_;
};

} // namespace

std::optional<double> percentile(std::vector<double> values, double p) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
    return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

ReportTables summarize(const BenchmarkReport& report) {
    ReportTables t;

    std::vector<std::string> model_order;
    std::map<std::string, std::vector<const RunResult*>> by_model;
    std::map<int, std::pair<std::string, std::array<Acc, 2>>> by_scenario;
    std::map<std::pair<std::string, Strategy>, std::array<Acc, 2>> lift_acc;  // [off, on]
    std::map<std::pair<std::string, Strategy>, std::pair<Acc, Acc>> trigger_acc;
    for (const auto& r : report.runs) {
        if (!by_model.count(r.model)) model_order.push_back(r.model);
        by_model[r.model].push_back(&r);
        auto& sc = by_scenario[r.scenario_id];
        sc.first = r.scenario;
        sc.second[r.strategy == Strategy::Direct ? 0 : 1].add(r.pass ? 1.0 : 0.0);
        lift_acc[{r.model, r.strategy}][r.safeguards ? 1 : 0].add(r.pass ? 1.0 : 0.0);
        if (r.safeguards) {
            auto& trig = trigger_acc[{r.model, r.strategy}];
            trig.first.add(r.ensemble_triggered ? 1.0 : 0.0);
            trig.second.add(r.fallback_triggered ? 1.0 : 0.0);
        }
    }

    for (const auto& m : model_order) t.models.push_back(summarize_model(m, by_model[m]));
    if (!t.models.empty()) {
        ModelSummary mean;
        mean.model = "Mean";
        mean.pass_at_1 = mean_pair(t.models, &ModelSummary::pass_at_1);
        mean.value_accuracy = mean_pair(t.models, &ModelSummary::value_accuracy);
        mean.field_f1 = mean_pair(t.models, &ModelSummary::field_f1);
        mean.mean_latency_s = mean_pair(t.models, &ModelSummary::mean_latency_s);
        mean.p95_latency_s = mean_pair(t.models, &ModelSummary::p95_latency_s);
        double cost = 0.0;
        TokenUsage tokens;
        for (const auto& m : t.models) {
            cost += m.total_cost_usd;
            tokens += m.tokens;
            mean.runs += m.runs;
        }
        const auto n = static_cast<std::int64_t>(t.models.size());
        mean.total_cost_usd = cost / static_cast<double>(n);
        mean.tokens = {tokens.input_tokens / n, tokens.output_tokens / n};
        t.mean = mean;
    }

    Acc all_d, all_c;
    for (const auto& [id, entry] : by_scenario) {
        t.scenarios.push_back({id, entry.first, pair_of(entry.second[0], entry.second[1])});
        if (auto v = entry.second[0].mean()) all_d.add(*v);
        if (auto v = entry.second[1].mean()) all_c.add(*v);
    }
    t.scenario_mean = pair_of(all_d, all_c);

    for (const auto& m : model_order) {
        for (Strategy s : {Strategy::Direct, Strategy::Codegen}) {
            const auto it = lift_acc.find({m, s});
            if (it == lift_acc.end()) continue;
            LiftRow row;
            row.model = m;
            row.strategy = s;
            row.pass_off = it->second[0].mean();
            row.pass_on = it->second[1].mean();
            if (row.pass_on && row.pass_off) row.lift = *row.pass_on - *row.pass_off;
            if (const auto trig = trigger_acc.find({m, s}); trig != trigger_acc.end()) {
                row.ensemble_rate = trig->second.first.mean().value_or(0.0);
                row.fallback_rate = trig->second.second.mean().value_or(0.0);
            }
            t.lifts.push_back(row);
        }
    }
    return t;
}

RenderedReport render_report(const BenchmarkReport& report) {
    const ReportTables t = summarize(report);
    RenderedReport out;
    std::ostringstream text;

    {
        Table cross({"Model", "Provider", "D", "C", "D", "C", "D", "C", "Total Cost"}, 2);
        const auto row = [](const ModelSummary& m) {
            return std::vector<std::string>{m.model,
                                            m.provider,
                                            fixed(m.pass_at_1.direct, 2),
                                            fixed(m.pass_at_1.codegen, 2),
                                            fixed(m.value_accuracy.direct, 2),
                                            fixed(m.value_accuracy.codegen, 2),
                                            seconds(m.mean_latency_s.direct),
                                            seconds(m.mean_latency_s.codegen),
                                            dollars(m.total_cost_usd)};
        };
        for (const auto& m : t.models) cross.add(row(m));
        if (t.mean) {
            cross.rule();
            cross.add(row(*t.mean));
        }
        std::set<int> scenario_ids;
        std::set<std::tuple<std::string, int, Strategy, bool>> combinations;
        int runs = 0;
        for (const auto& r : report.runs) {
            scenario_ids.insert(r.scenario_id);
            combinations.emplace(r.model, r.scenario_id, r.strategy, r.safeguards);
            runs = std::max(runs, r.run);
        }
        const std::size_t per_model = t.models.empty() ? 0 : combinations.size() / t.models.size();
        text << "Cross-Model Results (Mean over " << scenario_ids.size() << " Scenarios, " << runs
             << " Runs per Combination, " << per_model << " Combinations per Model)\n"
             << cross.render({{2, 2, "pass@1"}, {4, 2, "Value Acc."}, {6, 2, "Mean Latency (s)"}})
             << "D = DIRECT, C = CODEGEN. Total cost covers every scenario-strategy-mode combination and run.\n";
        if (has_live_models(report)) text << kLiveNote << "\n";
        text << "\n";
    }
    {
        Table perf({"Model", "P95 Lat. (s)", "Tokens (total)", "Cost ($)"}, 1);
        for (const auto& m : t.models) {
            perf.add({m.model, seconds(m.p95_latency_s.direct) + "-" + seconds(m.p95_latency_s.codegen),
                      thousands(m.tokens.total()), fixed(m.total_cost_usd, 2)});
        }
        text << "Performance and Cost\n"
             << perf.render()
             << "P95 latency range shows DIRECT-CODEGEN, nearest rank over all runs of the strategy; with 3 runs per\n"
                "combination a single combination's P95 is its maximum. Tokens and cost are totals over all runs.\n\n";
    }
    {
        Table scen({"#", "Scenario", "D", "C"}, 2);
        for (const auto& s : t.scenarios) {
            scen.add({std::to_string(s.id), s.name, fixed(s.pass_at_1.direct, 2), fixed(s.pass_at_1.codegen, 2)});
        }
        if (!t.scenarios.empty()) {
            scen.rule();
            scen.add({"Mean", "", fixed(t.scenario_mean.direct, 2), fixed(t.scenario_mean.codegen, 2)});
        }
        text << "Per-Scenario pass@1 (mean across models)\n" << scen.render() << '\n';
    }
    {
        Table lift({"Model", "Strategy", "pass@1 on", "pass@1 off", "Lift", "Ensemble rate", "Fallback rate"}, 2);
        for (const auto& l : t.lifts) {
            lift.add({l.model, std::string(to_string(l.strategy)), fixed(l.pass_on, 2), fixed(l.pass_off, 2),
                      fixed(l.lift, 2), fixed(l.ensemble_rate, 2), fixed(l.fallback_rate, 2)});
        }
        text << "Safeguard Lift\n"
             << lift.render()
             << "Lift = mean pass@1 with safeguards on - mean pass@1 with safeguards off. Trigger rates are shares\n"
                "of safeguarded runs.\n";
    }
    out.text = text.str();

    json models = json::array();
    const auto model_json = [](const ModelSummary& m) {
        return json{{"model", m.model},
                    {"provider", m.provider},
                    {"pass_at_1", pair_json(m.pass_at_1)},
                    {"value_accuracy", pair_json(m.value_accuracy)},
                    {"field_f1", pair_json(m.field_f1)},
                    {"mean_latency_s", pair_json(m.mean_latency_s)},
                    {"p95_latency_s", pair_json(m.p95_latency_s)},
                    {"total_tokens", m.tokens.total()},
                    {"input_tokens", m.tokens.input_tokens},
                    {"output_tokens", m.tokens.output_tokens},
                    {"total_cost_usd", m.total_cost_usd},
                    {"runs", m.runs}};
    };
    for (const auto& m : t.models) models.push_back(model_json(m));
    json scenarios = json::array();
    for (const auto& s : t.scenarios) {
        scenarios.push_back({{"id", s.id}, {"scenario", s.name}, {"pass_at_1", pair_json(s.pass_at_1)}});
    }
    json lifts = json::array();
    for (const auto& l : t.lifts) {
        lifts.push_back({{"model", l.model},
                         {"strategy", to_string(l.strategy)},
                         {"pass_at_1_on", opt(l.pass_on)},
                         {"pass_at_1_off", opt(l.pass_off)},
                         {"lift", opt(l.lift)},
                         {"ensemble_rate", l.ensemble_rate},
                         {"fallback_rate", l.fallback_rate}});
    }
    json runs = json::array();
    for (const auto& r : report.runs) runs.push_back(to_json(r));
    out.document = {{"cross_model", models},
                    {"mean", t.mean ? model_json(*t.mean) : json(nullptr)},
                    {"per_scenario", scenarios},
                    {"per_scenario_mean", pair_json(t.scenario_mean)},
                    {"safeguard_lift", lifts},
                    {"safeguard_lift_definition", "mean pass@1 (safeguards on) - mean pass@1 (safeguards off)"},
                    {"runs", runs}};
    if (has_live_models(report)) out.document["note"] = kLiveNote;
    return out;
}

} // namespace schemabridge
