#include "schemabridge/llm/client.hpp"

#include <algorithm>

namespace schemabridge {

std::string_view to_string(ContractKind k) {
    switch (k) {
    case ContractKind::MismatchReport: return "MismatchReport";
    case ContractKind::SchemaMapping: return "SchemaMapping";
    case ContractKind::AdapterProgram: return "AdapterProgram";
    case ContractKind::TransformedData: return "TransformedData";
    }
    return "?";
}

namespace {

json nullable_string() { return {{"type", json::array({"string", "null"})}}; }

json object_of(json properties, json required) {
    return {{"type", "object"}, {"properties", std::move(properties)}, {"required", std::move(required)}};
}

json build_contract(ContractKind k) {
    switch (k) {
    case ContractKind::MismatchReport: {
        json item = object_of(
            {{"kind", {{"type", "string"},
                       {"enum", {"field_missing", "field_extra", "type_mismatch", "nesting_mismatch",
                                 "cardinality_mismatch", "naming_mismatch", "unit_mismatch"}}}},
             {"source_path", nullable_string()},
             {"target_path", nullable_string()},
             {"detail", {{"type", "string"}}},
             {"severity", {{"type", "string"}, {"enum", {"low", "medium", "high"}}}}},
            {"kind", "source_path", "target_path", "detail", "severity"});
        return object_of({{"mismatches", {{"type", "array"}, {"items", item}}}}, {"mismatches"});
    }
    case ContractKind::SchemaMapping: {
        json item = object_of({{"source_path", nullable_string()},
                               {"target_path", {{"type", "string"}}},
                               {"transform", {{"type", "string"}}},
                               {"confidence", {{"type", "number"}}}},
                              {"source_path", "target_path", "transform", "confidence"});
        return object_of({{"mappings", {{"type", "array"}, {"items", item}}}}, {"mappings"});
    }
    case ContractKind::AdapterProgram: {
        json item = object_of({{"target", {{"type", "string"}}}, {"expr", {{"type", "object"}}}}, {"target", "expr"});
        return object_of({{"assignments", {{"type", "array"}, {"items", item}}}}, {"assignments"});
    }
    case ContractKind::TransformedData:
        return object_of({{"data", {{"type", "object"}}}}, {"data"});
    }
    return json::object();
}

} // namespace

const json& contract_schema(ContractKind k) {
    static const std::array<json, kContractKinds> schemas = {
        build_contract(ContractKind::MismatchReport), build_contract(ContractKind::SchemaMapping),
        build_contract(ContractKind::AdapterProgram), build_contract(ContractKind::TransformedData)};
    return schemas[static_cast<std::size_t>(k)];
}

LlmClient::LlmClient(std::shared_ptr<LlmBackend> backend, ModelProfile profile, PromptSet prompts,
                     std::ptrdiff_t max_in_flight)
    : backend_(std::move(backend)), profile_(std::move(profile)), prompts_(std::move(prompts)),
      slots_(std::make_unique<std::counting_semaphore<>>(std::max<std::ptrdiff_t>(1, max_in_flight))) {
    if (!backend_) throw ConfigError("LLM client needs a backend");
    check_profile(profile_);
}

LlmClient::Raw LlmClient::complete_json(ContractKind contract, std::string prompt, const SchemaPair& pair,
                                        json context) const {
    LlmRequest request;
    request.contract = contract;
    request.prompt = std::move(prompt);
    request.parameters = request_parameters(profile_);
    request.timeout = std::chrono::seconds(profile_.timeout_s);
    request.pair = pair;
    request.context = std::move(context);

    LlmReply reply;
    TokenUsage spent;
    for (int attempt = 0;; ++attempt) {
        slots_->acquire();
        try {
            reply = backend_->send(request);
            slots_->release();
            break;
        } catch (const Timeout&) {
            slots_->release();
            if (attempt >= 1) throw;
        } catch (const TransportError&) {
            slots_->release();
            if (attempt >= 1) throw;
        } catch (...) {
            slots_->release();
            throw;
        }
    }
    spent += reply.usage;

    json value = json::parse(reply.content, nullptr, false);
    if (value.is_discarded() || !value.is_object())
        throw ContractViolation(std::string(to_string(contract)) + ": response is not a JSON object");
    return {std::move(value), spent};
}

} // namespace schemabridge
