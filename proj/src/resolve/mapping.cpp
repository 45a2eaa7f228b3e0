#include "schemabridge/resolve/mapping.hpp"

#include "schemabridge/llm/errors.hpp"

#include <algorithm>
#include <map>

namespace schemabridge {

double SchemaMapping::min_confidence() const {
    double m = 1.0;
    for (const auto& f : fields) m = std::min(m, f.confidence);
    return m;
}

const FieldMapping* SchemaMapping::for_target(const Path& target) const {
    for (const auto& f : fields) {
        if (f.target_path == target) return &f;
    }
    return nullptr;
}

json to_json(const FieldMapping& f) {
    return {{"source_path", f.source_path ? json(f.source_path->str()) : json(nullptr)},
            {"target_path", f.target_path.str()},
            {"transform", f.transform},
            {"confidence", f.confidence}};
}

json to_json(const SchemaMapping& m) {
    json list = json::array();
    for (const auto& f : m.fields) list.push_back(to_json(f));
    return {{"mappings", list}};
}

SchemaMapping mapping_from_json(const json& j, const SchemaPair& pair) {
    if (!j.is_object() || !j.contains("mappings") || !j["mappings"].is_array()) {
        throw ContractViolation("SchemaMapping: expected an object with a 'mappings' array");
    }
    SchemaMapping mapping{pair, {}};
    for (const auto& e : j["mappings"]) {
        if (!e.is_object()) throw ContractViolation("SchemaMapping: entry must be an object");
        FieldMapping f;
        try {
            if (auto it = e.find("source_path"); it != e.end() && !it->is_null()) {
                if (!it->is_string()) throw ContractViolation("SchemaMapping: source_path must be a string or null");
                if (!it->get<std::string>().empty()) f.source_path = Path::parse(it->get<std::string>());
            }
            if (!e.contains("target_path") || !e["target_path"].is_string()) {
                throw ContractViolation("SchemaMapping: target_path must be a string");
            }
            f.target_path = Path::parse(e["target_path"].get<std::string>());
        } catch (const PathError& err) {
            throw ContractViolation(std::string("SchemaMapping: ") + err.what());
        }
        if (f.target_path.empty()) throw ContractViolation("SchemaMapping: empty target_path");
        if (auto it = e.find("transform"); it != e.end() && !it->is_null()) {
            if (!it->is_string()) throw ContractViolation("SchemaMapping: transform must be a string");
            f.transform = it->get<std::string>();
        }
        if (!e.contains("confidence") || !e["confidence"].is_number()) {
            throw ContractViolation("SchemaMapping: confidence must be a number");
        }
        f.confidence = e["confidence"].get<double>();
        if (!(f.confidence >= 0.0 && f.confidence <= 1.0)) {
            throw ContractViolation("SchemaMapping: confidence outside [0,1]");
        }
        if (!f.source_path && f.transform.empty()) {
            throw ContractViolation("SchemaMapping: " + f.target_path.str() + " has neither source nor transform");
        }
        try {
            (void)parse_expr(f.transform, f.source_path ? &*f.source_path : nullptr);
        } catch (const ExprSyntaxError& err) {
            throw ContractViolation(std::string("SchemaMapping: transform for ") + f.target_path.str() + ": " + err.what());
        }
        mapping.fields.push_back(std::move(f));
    }
    return mapping;
}

void normalize_mapping(SchemaMapping& mapping, const Schema& target) {
    const auto leaves = leaf_paths(target);
    std::map<Path, std::size_t> best;
    std::vector<FieldMapping> kept;
    for (auto& f : mapping.fields) {
        if (!leaves.contains(f.target_path)) continue;
        auto it = best.find(f.target_path);
        if (it == best.end()) {
            best.emplace(f.target_path, kept.size());
            kept.push_back(std::move(f));
        } else if (f.confidence > kept[it->second].confidence) {
            kept[it->second] = std::move(f);
        }
    }
    mapping.fields = std::move(kept);
}

SchemaMapping identity_mapping(const Schema& source, const Schema& target) {
    SchemaMapping m{{source.hash(), target.hash()}, {}};
    const auto src = leaf_paths(source);
    for (const auto& p : leaf_paths(target)) {
        if (src.contains(p)) m.fields.push_back({p, p, "$", 1.0});
    }
    return m;
}

AdapterProgram compile_mapping(const SchemaMapping& mapping) {
    AdapterProgram p;
    for (const auto& f : mapping.fields) {
        // g++ 11 leaks already-built members when a brace initializer throws.
        ExprPtr expr = parse_expr(f.transform, f.source_path ? &*f.source_path : nullptr);
        p.assignments.push_back({f.target_path, std::move(expr)});
    }
    return p;
}

} // namespace schemabridge
