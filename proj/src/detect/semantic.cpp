#include "schemabridge/detect/semantic.hpp"

namespace schemabridge {

namespace {

std::optional<Path> optional_path(const json& entry, const char* key) {
    const auto it = entry.find(key);
    if (it == entry.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ContractViolation(std::string(key) + " must be a string or null");
    try {
        return Path::parse(it->get<std::string>());
    } catch (const PathError& e) {
        throw ContractViolation(std::string(key) + ": " + e.what());
    }
}

std::optional<Kind> kind_at(const Schema& schema, const std::optional<Path>& path) {
    if (!path) return std::nullopt;
    const SchemaNode* node = schema.node_at(*path);
    if (!node) return std::nullopt;
    return node->kind;
}

} // namespace

MismatchReport semantic_report_from_json(const json& j, const Schema& source, const Schema& target) {
    MismatchReport report{{source.hash(), target.hash()}, {}};
    const auto list = j.find("mismatches");
    if (list == j.end() || !list->is_array()) throw ContractViolation("MismatchReport: \"mismatches\" must be an array");
    for (const auto& entry : *list) {
        if (!entry.is_object()) throw ContractViolation("MismatchReport: entry must be an object");
        const auto kind_it = entry.find("kind");
        if (kind_it == entry.end() || !kind_it->is_string())
            throw ContractViolation("MismatchReport: entry needs a string \"kind\"");
        const auto kind = mismatch_kind_from_string(kind_it->get<std::string>());
        if (!kind) throw ContractViolation("MismatchReport: unknown kind " + kind_it->dump());

        Mismatch m;
        m.kind = *kind;
        m.source_path = optional_path(entry, "source_path");
        m.target_path = optional_path(entry, "target_path");
        if (!m.source_path && !m.target_path) throw ContractViolation("MismatchReport: entry without any path");
        if (const auto d = entry.find("detail"); d != entry.end() && d->is_string()) m.detail = d->get<std::string>();
        m.severity = Severity::Medium;
        if (const auto s = entry.find("severity"); s != entry.end() && s->is_string()) {
            const auto sev = severity_from_string(s->get<std::string>());
            if (!sev) throw ContractViolation("MismatchReport: unknown severity " + s->dump());
            m.severity = *sev;
        }
        m.origin = Origin::Semantic;
        if (m.kind != MismatchKind::NamingMismatch && m.kind != MismatchKind::UnitMismatch) continue;
        m.source_type = kind_at(source, m.source_path);
        m.target_type = kind_at(target, m.target_path);
        report.mismatches.push_back(std::move(m));
    }
    deduplicate(report);
    return report;
}

SemanticResult detect_semantic(LlmSession& llm, const Schema& source, const Schema& target) {
    SemanticResult result;
    result.report.pair = {source.hash(), target.hash()};
    try {
        const PromptVars vars{{"source_schema", source.document().dump(2)},
                              {"target_schema", target.document().dump(2)}};
        std::string prompt = render_prompt(llm.client().prompts().detect_mismatch, vars);
        json context = {{"source_schema", source.document()}, {"target_schema", target.document()}};
        auto done = llm.complete_structured(ContractKind::MismatchReport, std::move(prompt), result.report.pair,
                                            std::move(context), [&](const json& j) {
                                                return semantic_report_from_json(j, source, target);
                                            });
        result.report = std::move(done.value);
    } catch (const std::exception& e) {
        result.degraded = true;
        result.error = e.what();
        result.report.mismatches.clear();
    }
    return result;
}

} // namespace schemabridge
