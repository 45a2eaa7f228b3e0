#pragma once

#include "schemabridge/core/path.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace schemabridge {

/// Ratcliff/Obershelp gestalt ratio 2·M/(|a|+|b|), where M sums the
/// longest common blocks found recursively left and right of each match.
/// Two empty strings give 1.0.
[[nodiscard]] double similarity_ratio(std::string_view a, std::string_view b);

/// Lower-cased field name with separators removed and a trailing unit
/// token dropped: "temperature_celsius" -> "temperature", "cpuUsage" ->
/// "cpuusage".
[[nodiscard]] std::string normalize_field_name(std::string_view name);

/// Unit named by the last token of a field name ("temp_f" -> fahrenheit).
[[nodiscard]] std::optional<std::string> unit_from_name(std::string_view name);

/// Best of the leaf-name ratio and the whole-path ratio, both normalised.
[[nodiscard]] double path_similarity(const Path& a, const Path& b);

inline constexpr double kSimilarityCutoff = 0.6;

} // namespace schemabridge
