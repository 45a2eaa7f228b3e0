#include "schemabridge/safeguard/similarity.hpp"

#include "schemabridge/safeguard/units.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace schemabridge {

namespace {

struct Block {
    std::size_t a, b, size;
};

// Longest common block within a[alo,ahi) x b[blo,bhi); earliest in `a`,
// then earliest in `b`, on ties.
Block longest_match(std::string_view a, std::string_view b, std::size_t alo, std::size_t ahi, std::size_t blo,
                    std::size_t bhi) {
    Block best{alo, blo, 0};
    std::vector<std::size_t> prev(bhi - blo + 1, 0), cur(bhi - blo + 1, 0);
    for (std::size_t i = alo; i < ahi; ++i) {
        for (std::size_t j = blo; j < bhi; ++j) {
            const std::size_t k = j - blo + 1;
            cur[k] = a[i] == b[j] ? prev[k - 1] + 1 : 0;
            if (cur[k] > best.size) best = {i + 1 - cur[k], j + 1 - cur[k], cur[k]};
        }
        std::swap(prev, cur);
    }
    return best;
}

std::size_t matched_chars(std::string_view a, std::string_view b, std::size_t alo, std::size_t ahi, std::size_t blo,
                          std::size_t bhi) {
    if (alo >= ahi || blo >= bhi) return 0;
    const Block m = longest_match(a, b, alo, ahi, blo, bhi);
    if (m.size == 0) return 0;
    return m.size + matched_chars(a, b, alo, m.a, blo, m.b) +
           matched_chars(a, b, m.a + m.size, ahi, m.b + m.size, bhi);
}

// Splits on separators and lower-to-upper case changes.
std::vector<std::string> tokens(std::string_view name) {
    std::vector<std::string> out;
    std::string cur;
    char prev = '\0';
    for (char c : name) {
        const auto uc = static_cast<unsigned char>(c);
        if (!std::isalnum(uc)) {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            if (std::isupper(uc) && std::islower(static_cast<unsigned char>(prev)) && !cur.empty()) {
                out.push_back(std::move(cur));
                cur.clear();
            }
            cur += static_cast<char>(std::tolower(uc));
        }
        prev = c;
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

} // namespace

double similarity_ratio(std::string_view a, std::string_view b) {
    const std::size_t total = a.size() + b.size();
    if (total == 0) return 1.0;
    return 2.0 * static_cast<double>(matched_chars(a, b, 0, a.size(), 0, b.size())) / static_cast<double>(total);
}

std::optional<std::string> unit_from_name(std::string_view name) {
    const auto t = tokens(name);
    if (t.size() < 2) return std::nullopt;
    return canonical_unit(t.back());
}

std::string normalize_field_name(std::string_view name) {
    auto t = tokens(name);
    if (t.size() >= 2 && canonical_unit(t.back())) t.pop_back();
    std::string out;
    for (const auto& s : t) out += s;
    return out;
}

double path_similarity(const Path& a, const Path& b) {
    const double leaf = similarity_ratio(normalize_field_name(a.leaf_name()), normalize_field_name(b.leaf_name()));
    const Path ua = a.without_markers();
    const Path ub = b.without_markers();
    std::string pa, pb;
    for (const auto& s : ua.segments()) pa += normalize_field_name(s);
    for (const auto& s : ub.segments()) pb += normalize_field_name(s);
    return std::max(leaf, similarity_ratio(pa, pb));
}

} // namespace schemabridge
