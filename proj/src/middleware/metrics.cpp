#include "schemabridge/middleware/metrics.hpp"

#include <iostream>

namespace schemabridge {

double MetricsCounters::ensemble_rate() const {
    return transformed == 0 ? 0.0 : static_cast<double>(ensemble_triggered) / static_cast<double>(transformed);
}

double MetricsCounters::fallback_rate() const {
    return transformed == 0 ? 0.0 : static_cast<double>(fallback_triggered) / static_cast<double>(transformed);
}

json to_json(const MetricsCounters& c) {
    return {{"requests", c.requests},
            {"transformed", c.transformed},
            {"passthrough", c.passthrough},
            {"degraded", c.degraded},
            {"rejected", c.rejected},
            {"ensemble_triggered", c.ensemble_triggered},
            {"fallback_triggered", c.fallback_triggered},
            {"ensemble_rate", c.ensemble_rate()},
            {"fallback_rate", c.fallback_rate()},
            {"llm_calls", c.llm_calls},
            {"input_tokens", c.tokens.input_tokens},
            {"output_tokens", c.tokens.output_tokens},
            {"cost_usd", c.cost_usd}};
}

MetricsSink::MetricsSink(const std::filesystem::path& file) : file_(file.string()) {
    out_.emplace(file, std::ios::app);
}

void MetricsSink::record(const RequestRecord& r) noexcept {
    try {
        const std::string line = to_json(r).dump();
        std::lock_guard lock(mutex_);
        ++counters_.requests;
        switch (r.outcome) {
        case Outcome::Transformed: ++counters_.transformed; break;
        case Outcome::Passthrough: ++counters_.passthrough; break;
        case Outcome::Degraded: ++counters_.degraded; break;
        case Outcome::Rejected: ++counters_.rejected; break;
        }
        counters_.ensemble_triggered += r.ensemble_triggered ? 1 : 0;
        counters_.fallback_triggered += r.fallback_triggered ? 1 : 0;
        counters_.llm_calls += r.llm_calls;
        counters_.tokens += r.tokens;
        counters_.cost_usd += r.cost_usd;
        if (out_) {
            *out_ << line << '\n';
            out_->flush();
            if (!*out_ && !warned_) {
                warned_ = true;
                std::cerr << "schemabridge: cannot write metrics to " << file_ << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "schemabridge: metrics error: " << e.what() << '\n';
    }
}

MetricsCounters MetricsSink::counters() const {
    std::lock_guard lock(mutex_);
    return counters_;
}

} // namespace schemabridge
