#pragma once

#include "schemabridge/core/path.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace schemabridge {

using json = nlohmann::json;

enum class Kind { Object, Array, String, Number, Integer, Boolean, Null };

[[nodiscard]] std::string_view to_string(Kind kind);
[[nodiscard]] std::optional<Kind> kind_from_string(std::string_view text);
[[nodiscard]] inline bool is_scalar(Kind k) { return k != Kind::Object && k != Kind::Array; }

struct SchemaNode;

struct Property {
    std::string name;
    std::shared_ptr<const SchemaNode> node;
};

/// One node of the supported JSON Schema subset. Immutable once built.
struct SchemaNode {
    Kind kind = Kind::Object;
    bool nullable = false;
    std::vector<Property> properties;          // object only, sorted by name
    std::set<std::string> required;            // object only, subset of property names
    std::shared_ptr<const SchemaNode> items;   // array only
    std::optional<std::string> unit_hint;      // "x-unit"
    std::optional<std::string> format_hint;    // "format"
    std::optional<std::string> description;
    std::optional<std::vector<json>> enum_values;

    [[nodiscard]] const SchemaNode* property(std::string_view name) const;
    [[nodiscard]] bool is_required(std::string_view name) const { return required.count(std::string(name)) > 0; }
};

/// SHA-256 digest of a schema's canonical text.
class SchemaHash {
public:
    using Digest = std::array<std::uint8_t, 32>;

    SchemaHash() = default;
    explicit SchemaHash(const Digest& digest) : digest_(digest) {}

    [[nodiscard]] const Digest& digest() const noexcept { return digest_; }
    [[nodiscard]] std::string hex() const;
    static SchemaHash from_hex(std::string_view hex);

    friend bool operator==(const SchemaHash&, const SchemaHash&) = default;
    friend auto operator<=>(const SchemaHash&, const SchemaHash&) = default;

private:
    Digest digest_{};
};

using SchemaPair = std::pair<SchemaHash, SchemaHash>;

struct SchemaPairHasher {
    std::size_t operator()(const SchemaPair& p) const noexcept;
};

class Schema {
public:
    Schema(std::shared_ptr<const SchemaNode> root, json document, std::vector<std::string> warnings);

    [[nodiscard]] const SchemaNode& root() const noexcept { return *root_; }
    /// The parsed document, the source of the canonical text.
    [[nodiscard]] const json& document() const noexcept { return document_; }
    /// Sorted keys, no whitespace, shortest round-trip numbers.
    [[nodiscard]] const std::string& canonical_text() const noexcept { return canonical_; }
    [[nodiscard]] const SchemaHash& hash() const noexcept { return hash_; }
    /// Keywords outside the supported subset that were parsed and ignored.
    [[nodiscard]] const std::vector<std::string>& warnings() const noexcept { return warnings_; }

    /// Node addressed by `path` (interior or leaf), nullptr if none.
    [[nodiscard]] const SchemaNode* node_at(const Path& path) const;

private:
    std::shared_ptr<const SchemaNode> root_;
    json document_;
    std::string canonical_;
    SchemaHash hash_;
    std::vector<std::string> warnings_;
};

/// Parses a schema document. The root must be an object schema because
/// the middleware only rewrites object bodies.
/// Throws MalformedSchema or UnsupportedKind.
[[nodiscard]] Schema parse_schema(std::string_view text);
[[nodiscard]] Schema schema_from_json(const json& document);

[[nodiscard]] std::string canonical_text(const json& document);
[[nodiscard]] SchemaHash sha256(std::string_view bytes);
[[nodiscard]] SchemaHash canonical_hash(const Schema& schema);

struct LeafInfo {
    Path path;
    const SchemaNode* node = nullptr;
    bool required = false;  // required at every level on the way down
};

/// Root-to-leaf paths in lexicographic order. Arrays of scalars end in a
/// marker segment; arrays of objects continue through it.
[[nodiscard]] std::set<Path> leaf_paths(const Schema& schema);
[[nodiscard]] std::vector<LeafInfo> leaves(const Schema& schema);

} // namespace schemabridge
