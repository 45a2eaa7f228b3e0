#include "schemabridge/safeguard/fallback.hpp"

#include "schemabridge/core/validate.hpp"
#include "schemabridge/resolve/adapter.hpp"
#include "schemabridge/resolve/builtins.hpp"
#include "schemabridge/safeguard/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

namespace schemabridge {

namespace {

bool numeric(Kind k) { return k == Kind::Integer || k == Kind::Number; }

bool mentions_epoch(const std::optional<std::string>& text) {
    if (!text) return false;
    std::string lower(*text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    return lower.find("epoch") != std::string::npos;
}

// Kind refined for pairing: timestamps (date-time text or epoch numbers)
// form their own class, integers and numbers share one.
std::string value_class(const SchemaNode& n) {
    if (n.kind == Kind::String && n.format_hint && *n.format_hint == "date-time") return "time";
    if (numeric(n.kind) && (mentions_epoch(n.description) || mentions_epoch(n.unit_hint))) return "time";
    if (numeric(n.kind)) return "number";
    return std::string(to_string(n.kind));
}

bool compatible(const LeafInfo& s, const LeafInfo& t) { return value_class(*s.node) == value_class(*t.node); }

std::optional<double> parse_number(const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first < last && std::isspace(static_cast<unsigned char>(*first))) ++first;
    while (last > first && std::isspace(static_cast<unsigned char>(last[-1]))) --last;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
    return v;
}

json to_integer(double v) {
    if (!std::isfinite(v) || std::fabs(v) > 9.2e18) return nullptr;
    return static_cast<std::int64_t>(std::llround(v));
}

bool in_enum(const json& v, const SchemaNode& node) {
    if (!node.enum_values) return true;
    return std::any_of(node.enum_values->begin(), node.enum_values->end(), [&](const json& e) {
        if (e.is_number() && v.is_number()) return e.get<double>() == v.get<double>();
        return e == v;
    });
}

json coerce_kind(const json& v, const SchemaNode& target) {
    if (v.is_null()) return nullptr;
    switch (target.kind) {
    case Kind::Integer:
        if (v.is_number_integer()) return v;
        if (v.is_number()) return to_integer(v.get<double>());
        if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (auto epoch = parse_iso8601(s)) return *epoch;
            if (auto d = parse_number(s)) return to_integer(*d);
        }
        return nullptr;
    case Kind::Number:
        if (v.is_number()) return v.get<double>();
        if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
        if (v.is_string()) {
            if (auto d = parse_number(v.get<std::string>())) return *d;
        }
        return nullptr;
    case Kind::String:
        if (v.is_string()) return v;
        if (v.is_number_integer() && target.format_hint && *target.format_hint == "date-time")
            return epoch_to_iso8601(v.get<std::int64_t>());
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        if (v.is_number()) return v.dump();
        return nullptr;
    case Kind::Boolean:
        if (v.is_boolean()) return v;
        if (v.is_number()) return v.get<double>() != 0.0;
        if (v.is_string()) {
            const auto s = v.get<std::string>();
            if (s == "true" || s == "1" || s == "yes") return true;
            if (s == "false" || s == "0" || s == "no") return false;
        }
        return nullptr;
    case Kind::Null: return nullptr;
    case Kind::Object: return v.is_object() ? v : json(nullptr);
    case Kind::Array: return v.is_array() ? v : json::array({v});
    }
    return nullptr;
}

struct Converter {
    const UnitConversion* unit = nullptr;
    const SchemaNode* target = nullptr;

    json operator()(const json& v) const {
        if (v.is_array() && target->kind != Kind::Array) {
            json out = json::array();
            for (const auto& e : v) out.push_back((*this)(e));
            return out;
        }
        json x = v;
        if (unit && x.is_number()) x = unit->apply(x.get<double>());
        x = coerce_kind(x, *target);
        if (!x.is_null() && !in_enum(x, *target)) return nullptr;
        return x;
    }
};

json first_scalar(const json& v) {
    if (!v.is_array()) return v;
    for (const auto& e : v) {
        json f = first_scalar(e);
        if (!f.is_null()) return f;
    }
    return nullptr;
}

// Brings `value` into line with `node`: drops what does not fit, fills
// required properties with zero values. False when `value` itself cannot
// be kept.
bool conform(json& value, const SchemaNode& node) {
    if (value.is_null()) return node.nullable;
    switch (node.kind) {
    case Kind::Object:
        if (!value.is_object()) return false;
        for (const auto& prop : node.properties) {
            auto it = value.find(prop.name);
            if (it != value.end() && !conform(*it, *prop.node)) {
                value.erase(it);
                it = value.end();
            }
            if (it == value.end() && node.is_required(prop.name)) value[prop.name] = zero_value(*prop.node);
        }
        return true;
    case Kind::Array: {
        if (!value.is_array()) return false;
        json kept = json::array();
        for (auto& e : value) {
            if (conform(e, *node.items)) kept.push_back(std::move(e));
        }
        value = std::move(kept);
        return true;
    }
    default:
        return matches_kind(value, node.kind) && in_enum(value, node);
    }
}

} // namespace

std::vector<FallbackPair> fallback_pairing(const Schema& source, const Schema& target) {
    const auto src = leaves(source);
    const auto tgt = leaves(target);

    struct Candidate {
        double score;
        std::size_t s, t;
    };
    std::vector<Candidate> candidates;
    for (std::size_t t = 0; t < tgt.size(); ++t) {
        for (std::size_t s = 0; s < src.size(); ++s) {
            const double score = path_similarity(src[s].path, tgt[t].path);
            if (score >= kSimilarityCutoff) candidates.push_back({score, s, t});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        if (tgt[a.t].path != tgt[b.t].path) return tgt[a.t].path.str() < tgt[b.t].path.str();
        return src[a.s].path.str() < src[b.s].path.str();
    });

    std::vector<bool> used_s(src.size(), false), used_t(tgt.size(), false);
    std::vector<FallbackPair> pairs;
    for (const auto& c : candidates) {
        if (used_s[c.s] || used_t[c.t]) continue;
        used_s[c.s] = used_t[c.t] = true;
        pairs.push_back({src[c.s].path, tgt[c.t].path, c.score});
    }

    // Leaves left over after renaming: pair a target with the only unused
    // source of a compatible kind. Repeat while that makes progress.
    for (bool progress = true; progress;) {
        progress = false;
        for (std::size_t t = 0; t < tgt.size(); ++t) {
            if (used_t[t]) continue;
            std::optional<std::size_t> only;
            int count = 0;
            for (std::size_t s = 0; s < src.size(); ++s) {
                if (used_s[s] || !compatible(src[s], tgt[t])) continue;
                ++count;
                only = s;
            }
            if (count != 1) continue;
            // The source must not be the unique candidate of another target too.
            int rivals = 0;
            for (std::size_t u = 0; u < tgt.size(); ++u) {
                if (!used_t[u] && u != t && compatible(src[*only], tgt[u])) ++rivals;
            }
            if (rivals > 0) continue;
            used_s[*only] = used_t[t] = true;
            pairs.push_back({src[*only].path, tgt[t].path, 0.0});
            progress = true;
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const FallbackPair& a, const FallbackPair& b) { return a.target < b.target; });
    return pairs;
}

std::optional<std::string> leaf_unit(const Path& path, const SchemaNode& node) {
    if (node.unit_hint) {
        if (auto u = canonical_unit(*node.unit_hint)) return u;
    }
    if (node.description) {
        if (auto u = unit_in_text(*node.description)) return u;
    }
    return unit_from_name(path.leaf_name());
}

json coerce_value(const json& value, const SchemaNode& target) { return coerce_kind(value, target); }

json zero_value(const SchemaNode& node) {
    if (node.enum_values && !node.enum_values->empty()) return node.enum_values->front();
    switch (node.kind) {
    case Kind::Object: {
        json out = json::object();
        conform(out, node);
        return out;
    }
    case Kind::Array: return json::array();
    case Kind::String: return "";
    case Kind::Integer: return 0;
    case Kind::Number: return 0.0;
    case Kind::Boolean: return false;
    case Kind::Null: return nullptr;
    }
    return nullptr;
}

json fallback_transform(const json& data, const Schema& source, const Schema& target, const UnitRegistry& units) {
    json out = json::object();
    try {
        for (const auto& pair : fallback_pairing(source, target)) {
            const SchemaNode* s_node = source.node_at(pair.source);
            const SchemaNode* t_node = target.node_at(pair.target);
            if (!s_node || !t_node) continue;

            Converter convert{nullptr, t_node};
            const auto su = leaf_unit(pair.source, *s_node);
            const auto tu = leaf_unit(pair.target, *t_node);
            if (su && tu && *su != *tu) convert.unit = units.find(*su, *tu);

            json value = get_path(data, pair.source);
            const bool s_many = pair.source.marker_count() > 0;
            const bool t_many = pair.target.marker_count() > 0;
            if (s_many && !t_many) value = first_scalar(value);
            value = convert(value);
            if (value.is_null()) continue;
            try {
                set_path(out, pair.target, value);
            } catch (const Error&) {
                set_path(out, pair.target, json::array({value}));
            }
        }
    } catch (const std::exception&) {
        // Whatever was produced so far is kept and completed below.
    }
    try {
        if (!conform(out, target.root())) out = zero_value(target.root());
    } catch (const std::exception&) {
        out = zero_value(target.root());
    }
    return out;
}

} // namespace schemabridge
