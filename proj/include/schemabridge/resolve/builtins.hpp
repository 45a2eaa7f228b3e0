#pragma once

#include "schemabridge/core/errors.hpp"
#include "schemabridge/core/schema.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace schemabridge {

/// Runtime failure while interpreting an adapter expression.
class EvalError : public Error {
public:
    using Error::Error;
};

struct BuiltinSignature {
    std::string_view name;
    std::size_t min_args;
    std::size_t max_args;  // SIZE_MAX for variadic
};

/// Whitelisted adapter functions; nullptr for anything else.
[[nodiscard]] const BuiltinSignature* find_builtin(std::string_view name);
[[nodiscard]] std::span<const BuiltinSignature> builtins();

/// Applies a whitelisted function. Null arguments propagate to a null
/// result except for wrap_array and concat. Throws EvalError.
[[nodiscard]] json call_builtin(std::string_view name, std::span<const json> args);

/// Parses `YYYY-MM-DDTHH:MM:SS[.frac][Z|±HH:MM|±HHMM]` (a space may replace
/// `T`; no offset means UTC) to whole seconds since the Unix epoch.
[[nodiscard]] std::optional<std::int64_t> parse_iso8601(std::string_view text);
[[nodiscard]] std::int64_t iso8601_to_epoch(std::string_view text);
[[nodiscard]] std::string epoch_to_iso8601(std::int64_t seconds);

[[nodiscard]] double celsius_to_fahrenheit(double c);
[[nodiscard]] double fahrenheit_to_celsius(double f);
[[nodiscard]] double kmh_to_mph(double kmh);
[[nodiscard]] double mph_to_kmh(double mph);
[[nodiscard]] double m_to_ft(double m);
[[nodiscard]] double ft_to_m(double ft);

} // namespace schemabridge
