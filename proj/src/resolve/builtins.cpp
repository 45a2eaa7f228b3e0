#include "schemabridge/resolve/builtins.hpp"

#include "schemabridge/safeguard/units.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace schemabridge {

namespace {

constexpr std::size_t kVariadic = std::numeric_limits<std::size_t>::max();

constexpr BuiltinSignature kBuiltins[] = {
    {"to_float", 1, 1},
    {"to_int", 1, 1},
    {"to_string", 1, 1},
    {"round", 2, 2},
    {"celsius_to_fahrenheit", 1, 1},
    {"fahrenheit_to_celsius", 1, 1},
    {"kmh_to_mph", 1, 1},
    {"mph_to_kmh", 1, 1},
    {"m_to_ft", 1, 1},
    {"ft_to_m", 1, 1},
    {"iso8601_to_epoch", 1, 1},
    {"epoch_to_iso8601", 1, 1},
    {"first", 1, 1},
    {"wrap_array", 1, 1},
    {"mean", 1, 1},
    {"min", 1, kVariadic},
    {"max", 1, kVariadic},
    {"lower", 1, 1},
    {"upper", 1, 1},
    {"concat", 1, kVariadic},
};

std::string describe(const json& v) { return v.dump() + " (" + v.type_name() + ")"; }

double as_number(std::string_view fn, const json& v) {
    if (v.is_number()) return v.get<double>();
    throw EvalError(std::string(fn) + ": expected a number, got " + describe(v));
}

const std::string& as_string(std::string_view fn, const json& v) {
    if (v.is_string()) return v.get_ref<const std::string&>();
    throw EvalError(std::string(fn) + ": expected a string, got " + describe(v));
}

std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double d = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(d)) return std::nullopt;
    return d;
}

json to_int(const json& v) {
    double d = 0.0;
    if (v.is_number_integer()) return v;
    if (v.is_number_float()) {
        d = v.get<double>();
    } else if (v.is_boolean()) {
        return v.get<bool>() ? 1 : 0;
    } else if (v.is_string()) {
        auto parsed = parse_double(v.get_ref<const std::string&>());
        if (!parsed) throw EvalError("to_int: cannot parse " + describe(v));
        d = *parsed;
    } else {
        throw EvalError("to_int: unsupported " + describe(v));
    }
    d = std::trunc(d);
    if (!std::isfinite(d) || d < -9.2e18 || d > 9.2e18) throw EvalError("to_int: out of range " + describe(v));
    return static_cast<std::int64_t>(d);
}

json to_float(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
    if (v.is_string()) {
        if (auto d = parse_double(v.get_ref<const std::string&>())) return *d;
    }
    throw EvalError("to_float: cannot convert " + describe(v));
}

json to_string_value(const json& v) {
    if (v.is_string()) return v;
    if (v.is_structured()) throw EvalError("to_string: cannot convert " + describe(v));
    return v.dump();
}

std::vector<double> numeric_list(std::string_view fn, std::span<const json> args) {
    std::vector<double> values;
    auto push = [&](const json& v) {
        if (!v.is_null()) values.push_back(as_number(fn, v));
    };
    if (args.size() == 1 && args[0].is_array()) {
        for (const auto& v : args[0]) push(v);
    } else {
        for (const auto& v : args) push(v);
    }
    if (values.empty()) throw EvalError(std::string(fn) + ": no values");
    return values;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y += m <= 2;
}

bool leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

} // namespace

std::span<const BuiltinSignature> builtins() { return kBuiltins; }

const BuiltinSignature* find_builtin(std::string_view name) {
    for (const auto& b : kBuiltins) {
        if (b.name == name) return &b;
    }
    return nullptr;
}

std::optional<std::int64_t> parse_iso8601(std::string_view s) {
    std::size_t i = 0;
    auto digits = [&](std::size_t n, int& out) {
        if (i + n > s.size()) return false;
        out = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const char c = s[i + k];
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
            out = out * 10 + (c - '0');
        }
        i += n;
        return true;
    };
    auto expect = [&](char c) {
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    };
    int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
    if (!digits(4, year) || !expect('-') || !digits(2, month) || !expect('-') || !digits(2, day)) return std::nullopt;
    if (!(expect('T') || expect('t') || expect(' '))) return std::nullopt;
    if (!digits(2, hour) || !expect(':') || !digits(2, minute) || !expect(':') || !digits(2, second)) return std::nullopt;
    if (expect('.')) {
        const auto start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) return std::nullopt;
    }
    int offset_seconds = 0;
    if (expect('Z') || expect('z')) {
        // UTC
    } else if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        const int sign = s[i] == '-' ? -1 : 1;
        ++i;
        int oh = 0, om = 0;
        if (!digits(2, oh)) return std::nullopt;
        expect(':');
        if (!digits(2, om)) return std::nullopt;
        if (oh > 23 || om > 59) return std::nullopt;
        offset_seconds = sign * (oh * 3600 + om * 60);
    }
    if (i != s.size()) return std::nullopt;
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month < 1 || month > 12 || day < 1) return std::nullopt;
    const int max_day = kDays[month - 1] + (month == 2 && leap(year) ? 1 : 0);
    if (day > max_day || hour > 23 || minute > 59 || second > 60) return std::nullopt;
    const std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    return days * 86400 + hour * 3600 + minute * 60 + second - offset_seconds;
}

std::int64_t iso8601_to_epoch(std::string_view text) {
    if (auto v = parse_iso8601(text)) return *v;
    throw EvalError("iso8601_to_epoch: malformed timestamp \"" + std::string(text) + "\"");
}

std::string epoch_to_iso8601(std::int64_t seconds) {
    std::int64_t days = seconds / 86400;
    std::int64_t rem = seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t y = 0;
    unsigned m = 0, d = 0;
    civil_from_days(days, y, m, d);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<long long>(y), m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

double celsius_to_fahrenheit(double c) { return convert_unit(c, "celsius", "fahrenheit"); }
double fahrenheit_to_celsius(double f) { return convert_unit(f, "fahrenheit", "celsius"); }
double kmh_to_mph(double kmh) { return convert_unit(kmh, "kmh", "mph"); }
double mph_to_kmh(double mph) { return convert_unit(mph, "mph", "kmh"); }
double m_to_ft(double m) { return convert_unit(m, "m", "ft"); }
double ft_to_m(double ft) { return convert_unit(ft, "ft", "m"); }

json call_builtin(std::string_view name, std::span<const json> args) {
    const auto* sig = find_builtin(name);
    if (sig == nullptr) throw EvalError("unknown function '" + std::string(name) + "'");
    if (args.size() < sig->min_args || args.size() > sig->max_args) {
        throw EvalError(std::string(name) + ": wrong number of arguments (" + std::to_string(args.size()) + ")");
    }
    if (name == "wrap_array") return json::array({args[0]});
    if (name == "concat") {
        std::string out;
        for (const auto& a : args) {
            if (!a.is_null()) out += to_string_value(a).get<std::string>();
        }
        return out;
    }
    if (std::any_of(args.begin(), args.end(), [](const json& a) { return a.is_null(); })) return nullptr;

    const json& x = args[0];
    if (name == "to_float") return to_float(x);
    if (name == "to_int") return to_int(x);
    if (name == "to_string") return to_string_value(x);
    if (name == "round") {
        const double v = as_number(name, x);
        const json& digits_arg = args[1];
        if (!digits_arg.is_number_integer() || digits_arg.get<std::int64_t>() < 0 || digits_arg.get<std::int64_t>() > 15) {
            throw EvalError("round: digits must be an integer in [0, 15]");
        }
        const double scale = std::pow(10.0, static_cast<double>(digits_arg.get<std::int64_t>()));
        return std::round(v * scale) / scale;
    }
    if (name == "celsius_to_fahrenheit") return celsius_to_fahrenheit(as_number(name, x));
    if (name == "fahrenheit_to_celsius") return fahrenheit_to_celsius(as_number(name, x));
    if (name == "kmh_to_mph") return kmh_to_mph(as_number(name, x));
    if (name == "mph_to_kmh") return mph_to_kmh(as_number(name, x));
    if (name == "m_to_ft") return m_to_ft(as_number(name, x));
    if (name == "ft_to_m") return ft_to_m(as_number(name, x));
    if (name == "iso8601_to_epoch") return iso8601_to_epoch(as_string(name, x));
    if (name == "epoch_to_iso8601") {
        const json i = to_int(x);
        return epoch_to_iso8601(i.get<std::int64_t>());
    }
    if (name == "first") {
        if (!x.is_array()) return x;
        if (x.empty()) return nullptr;
        return x.front();
    }
    if (name == "mean") {
        const auto values = numeric_list(name, args);
        return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    }
    if (name == "min" || name == "max") {
        const bool all_int = [&] {
            auto check = [](const json& v) { return v.is_null() || v.is_number_integer(); };
            if (args.size() == 1 && args[0].is_array()) return std::all_of(args[0].begin(), args[0].end(), check);
            return std::all_of(args.begin(), args.end(), check);
        }();
        const auto values = numeric_list(name, args);
        const double r = name == "min" ? *std::min_element(values.begin(), values.end())
                                       : *std::max_element(values.begin(), values.end());
        if (all_int) return static_cast<std::int64_t>(r);
        return r;
    }
    if (name == "lower" || name == "upper") {
        std::string s = as_string(name, x);
        std::transform(s.begin(), s.end(), s.begin(), [&](unsigned char c) {
            return static_cast<char>(name == "lower" ? std::tolower(c) : std::toupper(c));
        });
        return s;
    }
    throw EvalError("unhandled function '" + std::string(name) + "'");
}

} // namespace schemabridge
