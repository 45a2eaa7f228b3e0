#include "schemabridge/core/validate.hpp"

#include <algorithm>
#include <cmath>

namespace schemabridge {

bool matches_kind(const json& value, Kind kind) {
    switch (kind) {
    case Kind::Object: return value.is_object();
    case Kind::Array: return value.is_array();
    case Kind::String: return value.is_string();
    case Kind::Number: return value.is_number();
    case Kind::Integer:
        if (value.is_number_integer()) return true;
        if (value.is_number_float()) {
            const double d = value.get<double>();
            return std::isfinite(d) && std::floor(d) == d;
        }
        return false;
    case Kind::Boolean: return value.is_boolean();
    case Kind::Null: return value.is_null();
    }
    return false;
}

namespace {

bool json_equal_numeric(const json& a, const json& b) {
    if (a.is_number() && b.is_number()) return a.get<double>() == b.get<double>();
    return a == b;
}

void check(const json& value, const SchemaNode& node, const Path& at, std::vector<Violation>& out) {
    if (value.is_null() && node.nullable) return;
    if (!matches_kind(value, node.kind)) {
        out.push_back({at, "expected " + std::string(to_string(node.kind)) + ", got " + value.type_name()});
        return;
    }
    if (node.enum_values) {
        const auto& allowed = *node.enum_values;
        if (std::none_of(allowed.begin(), allowed.end(), [&](const json& e) { return json_equal_numeric(e, value); })) {
            out.push_back({at, "value " + value.dump() + " not in enum"});
        }
    }
    if (node.kind == Kind::Object) {
        for (const auto& name : node.required) {
            if (!value.contains(name)) {
                out.push_back({at.child(name), "required property missing"});
            }
        }
        for (const auto& prop : node.properties) {
            if (auto it = value.find(prop.name); it != value.end()) {
                check(*it, *prop.node, at.child(prop.name), out);
            }
        }
    } else if (node.kind == Kind::Array) {
        for (const auto& element : value) {
            check(element, *node.items, at.element(), out);
        }
    }
}

} // namespace

std::vector<Violation> validate_instance(const json& instance, const SchemaNode& node) {
    std::vector<Violation> out;
    check(instance, node, Path{}, out);
    return out;
}

std::vector<Violation> validate_instance(const json& instance, const Schema& schema) {
    return validate_instance(instance, schema.root());
}

} // namespace schemabridge
