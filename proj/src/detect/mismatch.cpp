#include "schemabridge/detect/mismatch.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace schemabridge {

namespace {

constexpr std::pair<std::string_view, MismatchKind> kKindNames[] = {
    {"field_missing", MismatchKind::FieldMissing},
    {"field_extra", MismatchKind::FieldExtra},
    {"type_mismatch", MismatchKind::TypeMismatch},
    {"nesting_mismatch", MismatchKind::NestingMismatch},
    {"cardinality_mismatch", MismatchKind::CardinalityMismatch},
    {"naming_mismatch", MismatchKind::NamingMismatch},
    {"unit_mismatch", MismatchKind::UnitMismatch},
};

std::string path_key(const std::optional<Path>& p) { return p ? p->str() : std::string{}; }

auto identity_key(const Mismatch& m) { return std::make_tuple(m.kind, path_key(m.source_path), path_key(m.target_path)); }
auto pair_key(const Mismatch& m) { return std::make_pair(path_key(m.source_path), path_key(m.target_path)); }

} // namespace

std::string_view to_string(MismatchKind k) {
    for (const auto& [name, kind] : kKindNames) {
        if (kind == k) return name;
    }
    return "field_missing";
}

std::optional<MismatchKind> mismatch_kind_from_string(std::string_view text) {
    for (const auto& [name, kind] : kKindNames) {
        if (name == text) return kind;
    }
    return std::nullopt;
}

std::string_view to_string(Severity s) {
    switch (s) {
    case Severity::Low: return "low";
    case Severity::Medium: return "medium";
    case Severity::High: return "high";
    }
    return "low";
}

std::optional<Severity> severity_from_string(std::string_view text) {
    if (text == "low") return Severity::Low;
    if (text == "medium") return Severity::Medium;
    if (text == "high") return Severity::High;
    return std::nullopt;
}

std::string_view to_string(Origin o) { return o == Origin::Structural ? "structural" : "semantic"; }

void deduplicate(MismatchReport& report) {
    std::set<decltype(identity_key(std::declval<const Mismatch&>()))> seen;
    std::vector<Mismatch> out;
    out.reserve(report.mismatches.size());
    for (auto& m : report.mismatches) {
        if (seen.insert(identity_key(m)).second) {
            out.push_back(std::move(m));
        }
    }
    report.mismatches = std::move(out);
}

json to_json(const Mismatch& m) {
    json j = {{"kind", to_string(m.kind)},
              {"detail", m.detail},
              {"severity", to_string(m.severity)},
              {"origin", to_string(m.origin)}};
    j["source_path"] = m.source_path ? json(m.source_path->str()) : json(nullptr);
    j["target_path"] = m.target_path ? json(m.target_path->str()) : json(nullptr);
    j["source_type"] = m.source_type ? json(to_string(*m.source_type)) : json(nullptr);
    j["target_type"] = m.target_type ? json(to_string(*m.target_type)) : json(nullptr);
    return j;
}

json to_json(const MismatchReport& r) {
    json list = json::array();
    for (const auto& m : r.mismatches) list.push_back(to_json(m));
    return {{"source_hash", r.pair.first.hex()}, {"target_hash", r.pair.second.hex()}, {"mismatches", list}};
}

Severity classify_severity(Kind source, Kind target) {
    if (source == target) return Severity::Low;
    auto numeric = [](Kind k) { return k == Kind::Integer || k == Kind::Number; };
    if (numeric(source) && numeric(target)) return Severity::Low;
    if (source == Kind::Object || target == Kind::Object) return Severity::High;
    // Remaining pairs are scalar/scalar across families or scalar/array.
    return Severity::Medium;
}

namespace {

std::string arrow(Kind a, Kind b) { return std::string(to_string(a)) + "->" + std::string(to_string(b)); }

Kind leaf_kind(const LeafInfo& leaf) { return leaf.node->kind; }

// Objects and arrays of objects; arrays of scalars are left to the
// cardinality pass.
bool is_container(const SchemaNode& node) {
    if (node.kind == Kind::Object) return true;
    return node.kind == Kind::Array && node.items && !is_scalar(node.items->kind);
}

} // namespace

MismatchReport detect_structural(const Schema& source, const Schema& target) {
    MismatchReport report{{source.hash(), target.hash()}, {}};
    const auto src = leaves(source);
    const auto tgt = leaves(target);
    std::vector<bool> src_done(src.size(), false);
    std::vector<bool> tgt_done(tgt.size(), false);

    std::map<Path, std::size_t> tgt_index;
    for (std::size_t i = 0; i < tgt.size(); ++i) tgt_index[tgt[i].path] = i;

    // 1. Same path at the same depth.
    for (std::size_t i = 0; i < src.size(); ++i) {
        const auto& s = src[i];
        if (auto it = tgt_index.find(s.path); it != tgt_index.end()) {
            const auto& t = tgt[it->second];
            src_done[i] = tgt_done[it->second] = true;
            if (leaf_kind(s) != leaf_kind(t)) {
                report.mismatches.push_back({MismatchKind::TypeMismatch, s.path, t.path, leaf_kind(s), leaf_kind(t),
                                             arrow(leaf_kind(s), leaf_kind(t)),
                                             classify_severity(leaf_kind(s), leaf_kind(t)), Origin::Structural});
            }
            continue;
        }
        if (const auto* node = target.node_at(s.path); node != nullptr && is_container(*node)) {
            src_done[i] = true;
            report.mismatches.push_back({MismatchKind::TypeMismatch, s.path, s.path, leaf_kind(s), node->kind,
                                         arrow(leaf_kind(s), node->kind), classify_severity(leaf_kind(s), node->kind),
                                         Origin::Structural});
        }
    }
    for (std::size_t j = 0; j < tgt.size(); ++j) {
        if (tgt_done[j]) continue;
        const auto& t = tgt[j];
        if (const auto* node = source.node_at(t.path); node != nullptr && is_container(*node)) {
            tgt_done[j] = true;
            report.mismatches.push_back({MismatchKind::TypeMismatch, t.path, t.path, node->kind, leaf_kind(t),
                                         arrow(node->kind, leaf_kind(t)), classify_severity(node->kind, leaf_kind(t)),
                                         Origin::Structural});
        }
    }

    // Pairs remaining leaves that agree on `key`, in lexicographic order on
    // both sides so the pairing is the same when roles are swapped.
    auto zip_by = [&](auto key_of, auto emit) {
        std::map<std::string, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> groups;
        for (std::size_t i = 0; i < src.size(); ++i) {
            if (!src_done[i]) groups[key_of(src[i].path)].first.push_back(i);
        }
        for (std::size_t j = 0; j < tgt.size(); ++j) {
            if (!tgt_done[j]) groups[key_of(tgt[j].path)].second.push_back(j);
        }
        for (auto& [key, lists] : groups) {
            auto& [si, tj] = lists;
            for (std::size_t k = 0; k < std::min(si.size(), tj.size()); ++k) {
                if (emit(src[si[k]], tgt[tj[k]])) {
                    src_done[si[k]] = tgt_done[tj[k]] = true;
                }
            }
        }
    };

    // 2. Same path once array markers are ignored: scalar against array.
    zip_by([](const Path& p) { return p.without_markers().str(); },
           [&](const LeafInfo& s, const LeafInfo& t) {
               if (s.path.marker_count() == t.path.marker_count()) return false;
               const Kind sk = s.path.marker_count() > 0 ? Kind::Array : leaf_kind(s);
               const Kind tk = t.path.marker_count() > 0 ? Kind::Array : leaf_kind(t);
               report.mismatches.push_back({MismatchKind::CardinalityMismatch, s.path, t.path, sk, tk, arrow(sk, tk),
                                            Severity::Medium, Origin::Structural});
               return true;
           });

    // 3. Same leaf name at a different depth.
    zip_by([](const Path& p) { return p.leaf_name(); },
           [&](const LeafInfo& s, const LeafInfo& t) {
               const Kind sk = leaf_kind(s);
               const Kind tk = leaf_kind(t);
               std::string detail = s.path.str() + "->" + t.path.str();
               if (sk != tk) detail += " (" + arrow(sk, tk) + ")";
               report.mismatches.push_back({MismatchKind::NestingMismatch, s.path, t.path, sk, tk, std::move(detail),
                                            classify_severity(sk, tk), Origin::Structural});
               return true;
           });

    // 4. Whatever is left has no counterpart.
    for (std::size_t i = 0; i < src.size(); ++i) {
        if (src_done[i]) continue;
        report.mismatches.push_back({MismatchKind::FieldMissing, src[i].path, std::nullopt, leaf_kind(src[i]),
                                     std::nullopt, "not present in target", Severity::Low, Origin::Structural});
    }
    for (std::size_t j = 0; j < tgt.size(); ++j) {
        if (tgt_done[j]) continue;
        report.mismatches.push_back({MismatchKind::FieldExtra, std::nullopt, tgt[j].path, std::nullopt,
                                     leaf_kind(tgt[j]), "not present in source",
                                     tgt[j].required ? Severity::High : Severity::Low, Origin::Structural});
    }

    std::stable_sort(report.mismatches.begin(), report.mismatches.end(), [](const Mismatch& a, const Mismatch& b) {
        return std::make_tuple(path_key(a.source_path), path_key(a.target_path), a.kind) <
               std::make_tuple(path_key(b.source_path), path_key(b.target_path), b.kind);
    });
    deduplicate(report);
    return report;
}

MismatchReport merge_reports(const MismatchReport& structural, const MismatchReport& semantic) {
    if (structural.pair != semantic.pair) {
        throw PairMismatch("cannot merge reports for different schema pairs");
    }
    std::set<std::pair<std::string, std::string>> semantic_pairs;
    for (const auto& m : semantic.mismatches) semantic_pairs.insert(pair_key(m));

    MismatchReport merged{structural.pair, {}};
    for (const auto& m : structural.mismatches) {
        if (!semantic_pairs.contains(pair_key(m))) merged.mismatches.push_back(m);
    }
    for (const auto& m : semantic.mismatches) merged.mismatches.push_back(m);
    deduplicate(merged);
    return merged;
}

} // namespace schemabridge
