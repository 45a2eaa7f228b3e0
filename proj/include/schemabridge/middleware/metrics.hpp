#pragma once

#include "schemabridge/middleware/record.hpp"

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>

namespace schemabridge {

struct MetricsCounters {
    std::int64_t requests = 0;
    std::int64_t transformed = 0;
    std::int64_t passthrough = 0;
    std::int64_t degraded = 0;
    std::int64_t rejected = 0;
    std::int64_t ensemble_triggered = 0;
    std::int64_t fallback_triggered = 0;
    std::int64_t llm_calls = 0;
    TokenUsage tokens;
    double cost_usd = 0.0;

    /// Shares of transformed requests.
    [[nodiscard]] double ensemble_rate() const;
    [[nodiscard]] double fallback_rate() const;
};

[[nodiscard]] json to_json(const MetricsCounters& c);

/// Append-only JSON-lines log plus running counters. Writes are
/// serialised; an I/O failure is reported on stderr and never propagates.
class MetricsSink {
public:
    MetricsSink() = default;
    explicit MetricsSink(const std::filesystem::path& file);

    void record(const RequestRecord& r) noexcept;
    [[nodiscard]] MetricsCounters counters() const;

private:
    mutable std::mutex mutex_;
    std::optional<std::ofstream> out_;
    std::string file_;
    MetricsCounters counters_;
    bool warned_ = false;
};

} // namespace schemabridge
