#pragma once

#include "schemabridge/core/registry.hpp"
#include "schemabridge/core/validate.hpp"
#include "schemabridge/resolve/resolver.hpp"
#include "schemabridge/safeguard/units.hpp"

#include <string>
#include <vector>

namespace schemabridge {

struct ValidationResult {
    bool valid = false;  // schema conformance only
    std::vector<Violation> violations;
    bool confidence_ok = false;

    [[nodiscard]] bool passed() const noexcept { return valid && confidence_ok; }
};

/// Tier 1: target-schema conformance plus the mapping confidence floor.
[[nodiscard]] ValidationResult validate_output(const json& output, const Schema& target, double min_confidence,
                                               const SchemaMapping& mapping);

enum class Tier { None, Ensemble, Fallback };

[[nodiscard]] std::string_view to_string(Tier t);

struct SafeguardedResult {
    json output;
    Tier tier_used = Tier::None;
    bool ensemble_triggered = false;
    bool fallback_triggered = false;
    ValidationResult validation;  // Tier 1 verdict on the resolution output
    std::string ensemble_error;   // why Tier 2 did not settle the request
};

struct SafeguardContext {
    const RouteConfig* route = nullptr;
    const json* data = nullptr;
    const MismatchReport* report = nullptr;
    LlmSession* llm = nullptr;       // null: Tier 2 fails immediately
    MappingCache* cache = nullptr;   // refreshed after a successful Tier 2
    const UnitRegistry* units = nullptr;
    int ensemble_size = 3;
};

/// Runs the tiers in order on a resolution output, or from Tier 2 when
/// `outcome` is null because resolution failed. Always returns an output.
[[nodiscard]] SafeguardedResult run_safeguards(const ResolutionOutcome* outcome, const SafeguardContext& ctx);

} // namespace schemabridge
