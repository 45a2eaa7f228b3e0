#pragma once

#include "schemabridge/detect/mismatch.hpp"
#include "schemabridge/llm/client.hpp"

#include <string>

namespace schemabridge {

struct SemanticResult {
    MismatchReport report;
    bool degraded = false;  // the LLM call failed; report is empty
    std::string error;
};

/// Parses the MismatchReport contract and keeps the naming and unit
/// findings. Throws ContractViolation on a malformed entry.
[[nodiscard]] MismatchReport semantic_report_from_json(const json& j, const Schema& source, const Schema& target);

/// Asks the model for naming and unit mismatches. Never throws: any LLM
/// failure yields an empty report with `degraded` set.
[[nodiscard]] SemanticResult detect_semantic(LlmSession& llm, const Schema& source, const Schema& target);

} // namespace schemabridge
