#pragma once

#include "schemabridge/core/errors.hpp"
#include "schemabridge/core/registry.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace schemabridge {

class UnknownConversion : public Error {
public:
    using Error::Error;
};

/// Affine conversion `(value + pre_offset) * num / den + post_offset`.
/// Keeping the scale as a ratio lets C->F evaluate as x*9/5+32 exactly as
/// written, so 18.5 C gives 65.3 F with no rounding residue.
struct UnitConversion {
    std::string from_unit;
    std::string to_unit;
    double pre_offset = 0.0;
    double num = 1.0;
    double den = 1.0;
    double post_offset = 0.0;

    [[nodiscard]] double apply(double value) const { return (value + pre_offset) * num / den + post_offset; }
    [[nodiscard]] UnitConversion inverse() const { return {to_unit, from_unit, -post_offset, den, num, -pre_offset}; }
};

/// Canonical unit name for an alias ("km/h" -> "kmh", "°C" -> "celsius").
[[nodiscard]] std::optional<std::string> canonical_unit(std::string_view alias);

/// First unit word found in free text such as a schema description.
/// Single-letter aliases are not recognised here.
[[nodiscard]] std::optional<std::string> unit_in_text(std::string_view text);

/// Registry of known conversions; every entry has its inverse.
class UnitRegistry {
public:
    /// C<->F, km/h<->mph, m<->ft.
    static const UnitRegistry& builtin();

    UnitRegistry() = default;

    /// Adds `conversion` and its inverse, replacing existing entries.
    void add(const UnitConversion& conversion);
    void add(const UnitDefinition& definition);

    [[nodiscard]] const UnitConversion* find(std::string_view from, std::string_view to) const;
    [[nodiscard]] const std::vector<UnitConversion>& entries() const noexcept { return entries_; }

    /// Throws UnknownConversion when the pair is not registered.
    [[nodiscard]] double convert(double value, std::string_view from, std::string_view to) const;

private:
    std::vector<UnitConversion> entries_;
};

/// Converts with the builtin registry; unit names may be aliases.
[[nodiscard]] double convert_unit(double value, std::string_view from_unit, std::string_view to_unit);

inline constexpr double kKmhToMph = 0.621371;
inline constexpr double kMetersToFeet = 3.28084;

} // namespace schemabridge
