#include "schemabridge/llm/profile.hpp"

#include "schemabridge/core/errors.hpp"

#include <fstream>

namespace schemabridge {

void check_profile(const ModelProfile& p) {
    if (p.name.empty()) throw ConfigError("model profile without a name");
    if (p.reasoning && p.timeout_s < 120) {
        throw ConfigError("profile " + p.name + ": reasoning models need a timeout of at least 120 s");
    }
    if (!p.reasoning && !p.accepts_temperature) {
        throw ConfigError("profile " + p.name + ": standard models run at temperature 0.0 and must accept it");
    }
    if (p.timeout_s <= 0) throw ConfigError("profile " + p.name + ": timeout must be positive");
    if (p.price_per_million_input_tokens < 0 || p.price_per_million_output_tokens < 0) {
        throw ConfigError("profile " + p.name + ": negative price");
    }
}

ModelProfile profile_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("model profile must be an object");
    ModelProfile p;
    try {
        p.name = j.at("name").get<std::string>();
        p.provider = j.value("provider", std::string("openai"));
        p.model = j.value("model", p.name);
        p.reasoning = j.value("reasoning", false);
        p.accepts_temperature = j.value("accepts_temperature", !p.reasoning);
        if (auto it = j.find("reasoning_effort"); it != j.end() && !it->is_null()) {
            p.reasoning_effort = it->get<std::string>();
        }
        p.timeout_s = j.value("timeout_s", p.reasoning ? 120 : 60);
        p.price_per_million_input_tokens = j.value("price_per_million_input_tokens", 0.0);
        p.price_per_million_output_tokens = j.value("price_per_million_output_tokens", 0.0);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model profile: ") + e.what());
    }
    check_profile(p);
    return p;
}

json to_json(const ModelProfile& p) {
    return {{"name", p.name},
            {"provider", p.provider},
            {"model", p.model},
            {"reasoning", p.reasoning},
            {"accepts_temperature", p.accepts_temperature},
            {"reasoning_effort", p.reasoning_effort ? json(*p.reasoning_effort) : json(nullptr)},
            {"timeout_s", p.timeout_s},
            {"price_per_million_input_tokens", p.price_per_million_input_tokens},
            {"price_per_million_output_tokens", p.price_per_million_output_tokens}};
}

std::vector<ModelProfile> load_profiles(const json& document) {
    if (!document.is_object() || !document.contains("profiles") || !document["profiles"].is_array()) {
        throw ConfigError("model config must be an object with a 'profiles' array");
    }
    std::vector<ModelProfile> out;
    for (const auto& p : document["profiles"]) out.push_back(profile_from_json(p));
    return out;
}

std::vector<ModelProfile> load_profiles_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot open model config " + file.string());
    try {
        return load_profiles(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("model config " + file.string() + ": " + e.what());
    }
}

const ModelProfile* find_profile(const std::vector<ModelProfile>& profiles, std::string_view name) {
    for (const auto& p : profiles) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

ModelProfile mock_profile() {
    ModelProfile p;
    p.name = "mock";
    p.provider = "mock";
    p.model = "mock";
    return p;
}

json request_parameters(const ModelProfile& p) {
    json params = {{"model", p.model}};
    if (p.accepts_temperature) params["temperature"] = 0.0;
    if (p.reasoning_effort) params["reasoning_effort"] = *p.reasoning_effort;
    return params;
}

double estimate_cost(const TokenUsage& usage, const ModelProfile& p) {
    return static_cast<double>(usage.input_tokens) * p.price_per_million_input_tokens / 1e6 +
           static_cast<double>(usage.output_tokens) * p.price_per_million_output_tokens / 1e6;
}

} // namespace schemabridge
