#include "schemabridge/core/path.hpp"

#include "schemabridge/core/errors.hpp"

#include <algorithm>

namespace schemabridge {

Path Path::parse(std::string_view text) {
    std::vector<std::string> segments;
    if (text.empty()) {
        return Path{};
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto dot = text.find('.', pos);
        std::string_view part = text.substr(pos, dot == std::string_view::npos ? std::string_view::npos : dot - pos);
        std::size_t markers = 0;
        while (part.size() >= 2 && part.substr(part.size() - 2) == kArrayMarker) {
            part.remove_suffix(2);
            ++markers;
        }
        if (part.find_first_of("[]") != std::string_view::npos) {
            throw PathError("stray bracket in path '" + std::string(text) + "'");
        }
        if (part.empty() && (markers == 0 || !segments.empty())) {
            throw PathError("empty segment in path '" + std::string(text) + "'");
        }
        if (!part.empty()) {
            segments.emplace_back(part);
        }
        for (std::size_t i = 0; i < markers; ++i) {
            segments.emplace_back(kArrayMarker);
        }
        if (dot == std::string_view::npos) {
            break;
        }
        pos = dot + 1;
        if (pos == text.size()) {
            throw PathError("trailing dot in path '" + std::string(text) + "'");
        }
    }
    return Path(std::move(segments));
}

std::string Path::str() const {
    std::string out;
    for (const auto& seg : segments_) {
        if (!is_marker(seg) && !out.empty()) {
            out += '.';
        }
        out += seg;
    }
    return out;
}

Path Path::child(std::string name) const {
    auto segs = segments_;
    segs.push_back(std::move(name));
    return Path(std::move(segs));
}

std::string Path::leaf_name() const {
    for (auto it = segments_.rbegin(); it != segments_.rend(); ++it) {
        if (!is_marker(*it)) {
            return *it;
        }
    }
    return {};
}

Path Path::without_markers() const {
    std::vector<std::string> segs;
    std::copy_if(segments_.begin(), segments_.end(), std::back_inserter(segs),
                 [](const std::string& s) { return !is_marker(s); });
    return Path(std::move(segs));
}

std::size_t Path::marker_count() const {
    return static_cast<std::size_t>(std::count_if(segments_.begin(), segments_.end(),
                                                  [](const std::string& s) { return is_marker(s); }));
}

} // namespace schemabridge
