#include "schemabridge/safeguard/units.hpp"

#include <algorithm>
#include <cctype>

namespace schemabridge {

namespace {

struct Alias {
    std::string_view alias;
    std::string_view unit;
};

constexpr Alias kAliases[] = {
    {"celsius", "celsius"},   {"c", "celsius"},        {"degc", "celsius"},        {"°c", "celsius"},
    {"centigrade", "celsius"}, {"fahrenheit", "fahrenheit"}, {"f", "fahrenheit"}, {"degf", "fahrenheit"},
    {"°f", "fahrenheit"},     {"kmh", "kmh"},          {"km/h", "kmh"},            {"kph", "kmh"},
    {"kmph", "kmh"},          {"mph", "mph"},          {"m", "m"},                 {"meter", "m"},
    {"meters", "m"},          {"metre", "m"},          {"metres", "m"},            {"ft", "ft"},
    {"feet", "ft"},           {"foot", "ft"},          {"percent", "percent"},     {"pct", "percent"},
    {"%", "percent"},
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

} // namespace

std::optional<std::string> canonical_unit(std::string_view alias) {
    std::string key = lower(alias);
    std::erase_if(key, [](unsigned char c) { return std::isspace(c) || c == '_' || c == '-'; });
    for (const auto& a : kAliases) {
        if (a.alias == key) return std::string(a.unit);
    }
    return std::nullopt;
}

std::optional<std::string> unit_in_text(std::string_view text) {
    const std::string s = lower(text);
    std::string word;
    auto flush = [&]() -> std::optional<std::string> {
        std::optional<std::string> found;
        if (word.size() >= 2) {
            if (auto u = canonical_unit(word)) found = u;
        }
        word.clear();
        return found;
    };
    for (char c : s) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc) || c == '/' || c == '%' || uc >= 0x80) {
            word += c;
        } else if (auto u = flush()) {
            return u;
        }
    }
    return flush();
}

const UnitRegistry& UnitRegistry::builtin() {
    static const UnitRegistry registry = [] {
        UnitRegistry r;
        r.add(UnitConversion{"celsius", "fahrenheit", 0.0, 9.0, 5.0, 32.0});
        r.add(UnitConversion{"kmh", "mph", 0.0, kKmhToMph, 1.0, 0.0});
        r.add(UnitConversion{"m", "ft", 0.0, kMetersToFeet, 1.0, 0.0});
        return r;
    }();
    return registry;
}

void UnitRegistry::add(const UnitConversion& conversion) {
    for (const auto& c : {conversion, conversion.inverse()}) {
        std::erase_if(entries_, [&](const UnitConversion& e) { return e.from_unit == c.from_unit && e.to_unit == c.to_unit; });
        entries_.push_back(c);
    }
}

void UnitRegistry::add(const UnitDefinition& definition) {
    const auto from = canonical_unit(definition.from).value_or(lower(definition.from));
    const auto to = canonical_unit(definition.to).value_or(lower(definition.to));
    add(UnitConversion{from, to, 0.0, definition.scale, 1.0, definition.offset});
}

const UnitConversion* UnitRegistry::find(std::string_view from, std::string_view to) const {
    const auto f = canonical_unit(from).value_or(lower(from));
    const auto t = canonical_unit(to).value_or(lower(to));
    for (const auto& e : entries_) {
        if (e.from_unit == f && e.to_unit == t) return &e;
    }
    return nullptr;
}

double UnitRegistry::convert(double value, std::string_view from, std::string_view to) const {
    if (const auto* c = find(from, to)) return c->apply(value);
    throw UnknownConversion("no conversion from '" + std::string(from) + "' to '" + std::string(to) + "'");
}

double convert_unit(double value, std::string_view from_unit, std::string_view to_unit) {
    return UnitRegistry::builtin().convert(value, from_unit, to_unit);
}

} // namespace schemabridge
