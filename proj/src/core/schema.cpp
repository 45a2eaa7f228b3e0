#include "schemabridge/core/schema.hpp"

#include "schemabridge/core/errors.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>

namespace schemabridge {

namespace {

const std::set<std::string, std::less<>> kSupported = {"type", "properties", "required", "items", "enum",
                                                       "x-unit", "format", "description"};
// Annotations that carry no validation meaning and are skipped silently.
const std::set<std::string, std::less<>> kAnnotations = {"$schema", "$id", "title", "$comment", "examples",
                                                         "default"};

std::shared_ptr<const SchemaNode> build_node(const json& doc, const std::string& where,
                                             std::vector<std::string>& warnings) {
    if (!doc.is_object()) {
        throw MalformedSchema(where + ": schema node must be an object");
    }
    auto node = std::make_shared<SchemaNode>();

    for (const auto& [key, value] : doc.items()) {
        if (!kSupported.contains(key) && !kAnnotations.contains(key)) {
            warnings.push_back(where + ": ignored keyword '" + key + "'");
        }
    }

    std::optional<Kind> kind;
    if (auto it = doc.find("type"); it != doc.end()) {
        auto resolve = [&](const json& t) {
            if (!t.is_string()) {
                throw MalformedSchema(where + ": 'type' must be a string");
            }
            auto k = kind_from_string(t.get<std::string>());
            if (!k) {
                throw UnsupportedKind(where + ": unsupported type '" + t.get<std::string>() + "'");
            }
            return *k;
        };
        if (it->is_array()) {
            // ["string", "null"] style unions are accepted as nullable kinds.
            for (const auto& t : *it) {
                Kind k = resolve(t);
                if (k == Kind::Null && it->size() > 1) {
                    node->nullable = true;
                } else if (!kind) {
                    kind = k;
                } else {
                    throw UnsupportedKind(where + ": multi-type unions are not supported");
                }
            }
        } else {
            kind = resolve(*it);
        }
    } else if (doc.contains("properties")) {
        kind = Kind::Object;
    } else if (doc.contains("items")) {
        kind = Kind::Array;
    } else if (doc.contains("enum")) {
        kind = Kind::String;
    } else {
        throw MalformedSchema(where + ": missing 'type'");
    }
    node->kind = *kind;

    if (node->kind == Kind::Object) {
        if (auto it = doc.find("properties"); it != doc.end()) {
            if (!it->is_object()) {
                throw MalformedSchema(where + ": 'properties' must be an object");
            }
            for (const auto& [name, sub] : it->items()) {
                if (name.empty() || name.find_first_of(".[]") != std::string::npos) {
                    throw MalformedSchema(where + ": property name '" + name + "' cannot be addressed by a path");
                }
                node->properties.push_back({name, build_node(sub, where + "." + name, warnings)});
            }
            std::sort(node->properties.begin(), node->properties.end(),
                      [](const Property& a, const Property& b) { return a.name < b.name; });
        }
        if (auto it = doc.find("required"); it != doc.end()) {
            if (!it->is_array()) {
                throw MalformedSchema(where + ": 'required' must be an array");
            }
            for (const auto& r : *it) {
                if (!r.is_string()) {
                    throw MalformedSchema(where + ": 'required' entries must be strings");
                }
                const auto name = r.get<std::string>();
                if (node->property(name) == nullptr) {
                    throw MalformedSchema(where + ": required name '" + name + "' not in properties");
                }
                node->required.insert(name);
            }
        }
    } else if (node->kind == Kind::Array) {
        auto it = doc.find("items");
        if (it == doc.end()) {
            throw MalformedSchema(where + ": array schema without 'items'");
        }
        node->items = build_node(*it, where + "[]", warnings);
    } else if (doc.contains("properties") || doc.contains("items")) {
        throw MalformedSchema(where + ": scalar schema with 'properties' or 'items'");
    }

    if (auto it = doc.find("x-unit"); it != doc.end() && it->is_string()) {
        node->unit_hint = it->get<std::string>();
    }
    if (auto it = doc.find("format"); it != doc.end() && it->is_string()) {
        node->format_hint = it->get<std::string>();
    }
    if (auto it = doc.find("description"); it != doc.end() && it->is_string()) {
        node->description = it->get<std::string>();
    }
    if (auto it = doc.find("enum"); it != doc.end()) {
        if (!it->is_array() || it->empty()) {
            throw MalformedSchema(where + ": 'enum' must be a non-empty array");
        }
        node->enum_values = it->get<std::vector<json>>();
    }
    return node;
}

void collect_leaves(const SchemaNode& node, const Path& at, bool required, std::vector<LeafInfo>& out) {
    switch (node.kind) {
    case Kind::Object:
        for (const auto& prop : node.properties) {
            collect_leaves(*prop.node, at.child(prop.name), required && node.is_required(prop.name), out);
        }
        break;
    case Kind::Array:
        if (node.items->kind == Kind::Object || node.items->kind == Kind::Array) {
            collect_leaves(*node.items, at.element(), required, out);
        } else {
            out.push_back({at.element(), node.items.get(), required});
        }
        break;
    default:
        out.push_back({at, &node, required});
    }
}

} // namespace

std::string_view to_string(Kind kind) {
    switch (kind) {
    case Kind::Object: return "object";
    case Kind::Array: return "array";
    case Kind::String: return "string";
    case Kind::Number: return "number";
    case Kind::Integer: return "integer";
    case Kind::Boolean: return "boolean";
    case Kind::Null: return "null";
    }
    return "null";
}

std::optional<Kind> kind_from_string(std::string_view text) {
    static constexpr std::pair<std::string_view, Kind> table[] = {
        {"object", Kind::Object}, {"array", Kind::Array},     {"string", Kind::String}, {"number", Kind::Number},
        {"integer", Kind::Integer}, {"boolean", Kind::Boolean}, {"null", Kind::Null}};
    for (const auto& [name, kind] : table) {
        if (name == text) {
            return kind;
        }
    }
    return std::nullopt;
}

const SchemaNode* SchemaNode::property(std::string_view name) const {
    auto it = std::lower_bound(properties.begin(), properties.end(), name,
                               [](const Property& p, std::string_view n) { return p.name < n; });
    if (it != properties.end() && it->name == name) {
        return it->node.get();
    }
    return nullptr;
}

std::string SchemaHash::hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (auto b : digest_) {
        out += digits[b >> 4];
        out += digits[b & 0xF];
    }
    return out;
}

SchemaHash SchemaHash::from_hex(std::string_view hex) {
    if (hex.size() != 64) {
        throw Error("schema hash must be 64 hex digits");
    }
    auto nibble = [](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
        throw Error("invalid hex digit in schema hash");
    };
    Digest d{};
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    }
    return SchemaHash(d);
}

std::size_t SchemaPairHasher::operator()(const SchemaPair& p) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        h = h << 8 | p.first.digest()[i];
    }
    std::size_t g = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        g = g << 8 | p.second.digest()[i];
    }
    return h ^ (g + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

Schema::Schema(std::shared_ptr<const SchemaNode> root, json document, std::vector<std::string> warnings)
    : root_(std::move(root)), document_(std::move(document)), canonical_(schemabridge::canonical_text(document_)),
      hash_(sha256(canonical_)), warnings_(std::move(warnings)) {}

const SchemaNode* Schema::node_at(const Path& path) const {
    const SchemaNode* node = root_.get();
    for (const auto& seg : path.segments()) {
        if (Path::is_marker(seg)) {
            if (node->kind != Kind::Array) return nullptr;
            node = node->items.get();
        } else {
            if (node->kind != Kind::Object) return nullptr;
            node = node->property(seg);
            if (node == nullptr) return nullptr;
        }
    }
    return node;
}

Schema parse_schema(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw MalformedSchema(std::string("invalid JSON: ") + e.what());
    }
    return schema_from_json(doc);
}

Schema schema_from_json(const json& document) {
    if (!document.is_object()) {
        throw MalformedSchema("schema document must be a JSON object");
    }
    std::vector<std::string> warnings;
    auto root = build_node(document, "$", warnings);
    if (root->kind != Kind::Object) {
        throw MalformedSchema("root schema must describe an object");
    }
    return Schema(std::move(root), document, std::move(warnings));
}

std::string canonical_text(const json& document) {
    // nlohmann's default object type is an ordered std::map and its number
    // output is shortest round-trip, which is exactly the canonical form.
    return document.dump(-1, ' ', false, json::error_handler_t::strict);
}

SchemaHash sha256(std::string_view bytes) {
    SchemaHash::Digest digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != digest.size()) {
        throw Error("SHA-256 computation failed");
    }
    return SchemaHash(digest);
}

SchemaHash canonical_hash(const Schema& schema) { return schema.hash(); }

std::vector<LeafInfo> leaves(const Schema& schema) {
    std::vector<LeafInfo> out;
    collect_leaves(schema.root(), Path{}, true, out);
    std::sort(out.begin(), out.end(), [](const LeafInfo& a, const LeafInfo& b) { return a.path < b.path; });
    return out;
}

std::set<Path> leaf_paths(const Schema& schema) {
    std::set<Path> out;
    for (auto& leaf : leaves(schema)) {
        out.insert(std::move(leaf.path));
    }
    return out;
}

} // namespace schemabridge
