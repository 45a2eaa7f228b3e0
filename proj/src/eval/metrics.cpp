#include "schemabridge/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace schemabridge {

bool leaf_equal(const json& a, const json& b, double epsilon) {
    if (a.is_number() && b.is_number()) return a == b || std::fabs(a.get<double>() - b.get<double>()) <= epsilon;
    return a == b;
}

namespace {

void compare(const json& a, const json& g, double eps, const std::string& path, std::vector<std::string>& diffs) {
    if (diffs.size() >= kMaxDiffs) return;
    const std::string where = path.empty() ? "<root>" : path;
    if (a.is_object() && g.is_object()) {
        std::set<std::string> keys;
        for (const auto& [k, v] : a.items()) keys.insert(k);
        for (const auto& [k, v] : g.items()) keys.insert(k);
        for (const auto& k : keys) {
            const std::string child = path.empty() ? k : path + "." + k;
            if (!a.contains(k)) diffs.push_back(child + ": missing (expected " + g.at(k).dump() + ")");
            else if (!g.contains(k)) diffs.push_back(child + ": unexpected " + a.at(k).dump());
            else compare(a.at(k), g.at(k), eps, child, diffs);
            if (diffs.size() >= kMaxDiffs) return;
        }
        return;
    }
    if (a.is_array() && g.is_array()) {
        if (a.size() != g.size()) {
            diffs.push_back(where + ": array length " + std::to_string(a.size()) + " != " + std::to_string(g.size()));
            return;
        }
        for (std::size_t i = 0; i < a.size(); ++i) compare(a[i], g[i], eps, path + "[" + std::to_string(i) + "]", diffs);
        return;
    }
    if (a.is_structured() || g.is_structured() || !leaf_equal(a, g, eps)) {
        diffs.push_back(where + ": " + a.dump() + " != " + g.dump());
    }
}

void collect(const json& v, const std::string& path, std::map<std::string, std::vector<json>>& out) {
    if (v.is_object() && !v.empty()) {
        for (const auto& [k, child] : v.items()) collect(child, path.empty() ? k : path + "." + k, out);
        return;
    }
    if (v.is_array()) {
        const bool scalars = std::none_of(v.begin(), v.end(), [](const json& e) { return e.is_object(); });
        if (scalars) {
            out[path + "[]"].push_back(v);
            return;
        }
        for (const auto& e : v) collect(e, path + "[]", out);
        return;
    }
    out[path].push_back(v);
}

bool values_match(const std::vector<json>& a, const std::vector<json>& b, double eps) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!compare_outputs(a[i], b[i], eps).pass) return false;
    }
    return true;
}

} // namespace

Comparison compare_outputs(const json& actual, const json& golden, double epsilon) {
    Comparison c;
    compare(actual, golden, epsilon, "", c.diffs);
    c.pass = c.diffs.empty();
    return c;
}

std::map<std::string, std::vector<json>> leaf_values(const json& document) {
    std::map<std::string, std::vector<json>> out;
    if (document.is_object()) {
        for (const auto& [k, child] : document.items()) collect(child, k, out);
    }
    return out;
}

double field_f1(const json& actual, const json& golden) {
    const auto a = leaf_values(actual);
    const auto e = leaf_values(golden);
    if (a.empty() && e.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& [k, v] : a) common += e.count(k);
    if (common == 0) return 0.0;
    const double p = static_cast<double>(common) / static_cast<double>(a.size());
    const double r = static_cast<double>(common) / static_cast<double>(e.size());
    return 2.0 * p * r / (p + r);
}

double value_accuracy(const json& actual, const json& golden, double epsilon) {
    const auto a = leaf_values(actual);
    const auto e = leaf_values(golden);
    std::size_t common = 0, matched = 0;
    for (const auto& [k, v] : a) {
        const auto it = e.find(k);
        if (it == e.end()) continue;
        ++common;
        if (values_match(v, it->second, epsilon)) ++matched;
    }
    return common == 0 ? 1.0 : static_cast<double>(matched) / static_cast<double>(common);
}

PrecisionRecall detection_prf(const MismatchReport& observed, const std::vector<ExpectedMismatch>& expected) {
    using Key = std::pair<std::string, std::string>;
    const auto str = [](const std::optional<Path>& p) { return p ? p->str() : std::string{}; };
    std::set<Key> obs, exp;
    for (const auto& m : observed.mismatches) obs.insert({str(m.source_path), str(m.target_path)});
    for (const auto& m : expected) exp.insert({str(m.source_path), str(m.target_path)});
    std::size_t hit = 0;
    for (const auto& k : obs) hit += exp.count(k);
    PrecisionRecall pr;
    pr.precision = obs.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(obs.size());
    pr.recall = exp.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(exp.size());
    return pr;
}

} // namespace schemabridge
