#pragma once

#include "schemabridge/llm/profile.hpp"
#include "schemabridge/safeguard/safeguards.hpp"

#include <cstdint>
#include <string>

namespace schemabridge {

enum class Outcome {
    Transformed,  // a transformed body was forwarded
    Passthrough,  // forwarded byte-identical
    Degraded,     // resolution failed without safeguards; original body forwarded
    Rejected,     // 400 before the pipeline ran
};

[[nodiscard]] std::string_view to_string(Outcome o);

/// One line of the metrics log.
struct RequestRecord {
    std::string route;  // matched path pattern, empty for passthrough
    std::string method;
    std::string path;
    std::int64_t timestamp_ms = 0;  // wall clock at arrival
    double detect_ms = 0.0;
    double resolve_ms = 0.0;
    double safeguard_ms = 0.0;
    int llm_calls = 0;
    TokenUsage tokens;
    double cost_usd = 0.0;
    Tier tier_used = Tier::None;
    bool cache_hit = false;
    bool ensemble_triggered = false;
    bool fallback_triggered = false;
    bool semantic_degraded = false;
    Outcome outcome = Outcome::Passthrough;
    int status = 0;  // status returned to the client
    std::string error;

    [[nodiscard]] double total_ms() const noexcept { return detect_ms + resolve_ms + safeguard_ms; }
};

[[nodiscard]] json to_json(const RequestRecord& r);

} // namespace schemabridge
