#pragma once

#include "schemabridge/core/errors.hpp"
#include "schemabridge/core/schema.hpp"

#include <optional>
#include <string>
#include <vector>

namespace schemabridge {

enum class MismatchKind {
    FieldMissing,  // source leaf with no counterpart in the target
    FieldExtra,    // target leaf with no counterpart in the source
    TypeMismatch,
    NestingMismatch,
    CardinalityMismatch,
    NamingMismatch,
    UnitMismatch,
};

enum class Severity { Low, Medium, High };
enum class Origin { Structural, Semantic };

[[nodiscard]] std::string_view to_string(MismatchKind k);
[[nodiscard]] std::optional<MismatchKind> mismatch_kind_from_string(std::string_view text);
[[nodiscard]] std::string_view to_string(Severity s);
[[nodiscard]] std::optional<Severity> severity_from_string(std::string_view text);
[[nodiscard]] std::string_view to_string(Origin o);

struct Mismatch {
    MismatchKind kind = MismatchKind::FieldMissing;
    std::optional<Path> source_path;
    std::optional<Path> target_path;
    std::optional<Kind> source_type;
    std::optional<Kind> target_type;
    std::string detail;
    Severity severity = Severity::Low;
    Origin origin = Origin::Structural;

    friend bool operator==(const Mismatch&, const Mismatch&) = default;
};

class PairMismatch : public Error {
public:
    using Error::Error;
};

struct MismatchReport {
    SchemaPair pair;
    std::vector<Mismatch> mismatches;

    [[nodiscard]] bool empty() const noexcept { return mismatches.empty(); }
};

/// Keeps the first entry for each (kind, source_path, target_path).
void deduplicate(MismatchReport& report);

[[nodiscard]] json to_json(const Mismatch& m);
[[nodiscard]] json to_json(const MismatchReport& r);

/// Severity from the distance between two kinds: numeric family is low,
/// coercible families medium, object against anything else high.
[[nodiscard]] Severity classify_severity(Kind source, Kind target);

/// Deterministic recursive walk over both schemas; no LLM involvement.
[[nodiscard]] MismatchReport detect_structural(const Schema& source, const Schema& target);

/// Semantic findings replace structural ones on the same
/// (source_path, target_path); the union is deduplicated.
/// Throws PairMismatch when the reports describe different schema pairs.
[[nodiscard]] MismatchReport merge_reports(const MismatchReport& structural, const MismatchReport& semantic);

} // namespace schemabridge
