#pragma once

#include "schemabridge/detect/mismatch.hpp"
#include "schemabridge/llm/client.hpp"
#include "schemabridge/resolve/mapping.hpp"

#include <vector>

namespace schemabridge {

class EnsembleFailure : public Error {
public:
    using Error::Error;
};

/// Majority vote over `n` member mappings (failed members are simply
/// absent from `members`). A (source_path, target_path) pair survives when
/// more than n/2 members contain it; its transform and confidence come from
/// the most confident supporting member, then the smallest transform text.
/// Survivors are ordered by source path, then votes, mean confidence and
/// target path. Throws EnsembleFailure when fewer than ⌈(n+1)/2⌉ members
/// are present or nothing survives.
[[nodiscard]] SchemaMapping vote_mappings(const std::vector<SchemaMapping>& members, int n, const SchemaPair& pair);

/// Issues `n` mapping generations concurrently and votes on them.
[[nodiscard]] SchemaMapping ensemble_vote(LlmSession& llm, const Schema& source, const Schema& target,
                                          const MismatchReport& report, int n = 3);

} // namespace schemabridge
