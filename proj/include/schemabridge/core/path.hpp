#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace schemabridge {

/// Location of a value inside a JSON document, e.g. `location.name` or
/// `readings[].temperature`. The `[]` marker segment stands for "every
/// element of the enclosing array".
class Path {
public:
    static constexpr std::string_view kArrayMarker = "[]";

    Path() = default;
    Path(std::initializer_list<std::string> segments) : segments_(segments) {}
    explicit Path(std::vector<std::string> segments) : segments_(std::move(segments)) {}

    /// Parses the dotted rendering. Throws PathError on empty segments or
    /// stray brackets.
    static Path parse(std::string_view text);

    [[nodiscard]] std::string str() const;

    [[nodiscard]] const std::vector<std::string>& segments() const noexcept { return segments_; }
    [[nodiscard]] bool empty() const noexcept { return segments_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return segments_.size(); }

    [[nodiscard]] Path child(std::string name) const;
    [[nodiscard]] Path element() const { return child(std::string(kArrayMarker)); }

    /// Last segment that is not an array marker; empty if none.
    [[nodiscard]] std::string leaf_name() const;
    /// Segments with array markers removed.
    [[nodiscard]] Path without_markers() const;
    [[nodiscard]] std::size_t marker_count() const;

    static bool is_marker(std::string_view segment) { return segment == kArrayMarker; }

    friend bool operator==(const Path&, const Path&) = default;
    friend auto operator<=>(const Path& a, const Path& b) { return a.str() <=> b.str(); }

private:
    std::vector<std::string> segments_;
};

} // namespace schemabridge

template <>
struct std::hash<schemabridge::Path> {
    std::size_t operator()(const schemabridge::Path& p) const noexcept {
        return std::hash<std::string>{}(p.str());
    }
};
