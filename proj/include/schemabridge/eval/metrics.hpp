#pragma once

#include "schemabridge/detect/mismatch.hpp"
#include "schemabridge/eval/fixture.hpp"

#include <map>
#include <string>
#include <vector>

namespace schemabridge {

inline constexpr double kDefaultEpsilon = 0.01;
inline constexpr std::size_t kMaxDiffs = 20;

struct Comparison {
    bool pass = false;
    std::vector<std::string> diffs;  // first differing paths with both values
};

/// Leaf rule: numbers are equal across integer/float representations when
/// |a-b| <= epsilon; everything else must match exactly.
[[nodiscard]] bool leaf_equal(const json& a, const json& b, double epsilon);

/// Recursive structural equality under the leaf rule.
[[nodiscard]] Comparison compare_outputs(const json& actual, const json& golden, double epsilon = kDefaultEpsilon);

/// Leaf paths of a JSON document with the value found at each. Array
/// elements share one marker segment; the values collected under a path
/// keep element order.
[[nodiscard]] std::map<std::string, std::vector<json>> leaf_values(const json& document);

/// Harmonic mean of leaf-key precision and recall; two empty objects score 1.
[[nodiscard]] double field_f1(const json& actual, const json& golden);

/// Share of common leaf paths whose values match; 1 when none are common.
[[nodiscard]] double value_accuracy(const json& actual, const json& golden, double epsilon = kDefaultEpsilon);

struct PrecisionRecall {
    double precision = 1.0;
    double recall = 1.0;
};

/// Overlap of (source_path, target_path) pairs; kinds are ignored. An empty
/// observation has precision 1, an empty expectation recall 1.
[[nodiscard]] PrecisionRecall detection_prf(const MismatchReport& observed,
                                            const std::vector<ExpectedMismatch>& expected);

} // namespace schemabridge
