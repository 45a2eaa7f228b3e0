#pragma once

#include "schemabridge/core/schema.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace schemabridge {

struct TokenUsage {
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;

    TokenUsage& operator+=(const TokenUsage& o) {
        input_tokens += o.input_tokens;
        output_tokens += o.output_tokens;
        return *this;
    }
    [[nodiscard]] std::int64_t total() const { return input_tokens + output_tokens; }
    friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

/// How a model family must be called. Reasoning models take longer and
/// reject `temperature`; standard models run at temperature 0.
struct ModelProfile {
    std::string name;      // profile key, e.g. "gpt-4o"
    std::string provider;  // "openai", "xai", "mock"
    std::string model;     // model id sent on the wire
    bool reasoning = false;
    bool accepts_temperature = true;
    std::optional<std::string> reasoning_effort;
    int timeout_s = 60;
    double price_per_million_input_tokens = 0.0;
    double price_per_million_output_tokens = 0.0;
};

/// Throws ConfigError when a profile breaks the timeout/temperature rules.
void check_profile(const ModelProfile& p);

[[nodiscard]] ModelProfile profile_from_json(const json& j);
[[nodiscard]] json to_json(const ModelProfile& p);
/// {"profiles":[...]}; every entry is checked.
[[nodiscard]] std::vector<ModelProfile> load_profiles(const json& document);
[[nodiscard]] std::vector<ModelProfile> load_profiles_file(const std::filesystem::path& file);
[[nodiscard]] const ModelProfile* find_profile(const std::vector<ModelProfile>& profiles, std::string_view name);

/// Zero-cost profile for the offline backend.
[[nodiscard]] ModelProfile mock_profile();

/// Sampling parameters for the request body: `temperature: 0.0` only when
/// the model accepts it, `reasoning_effort` only when configured.
[[nodiscard]] json request_parameters(const ModelProfile& p);

/// input·price_in/1e6 + output·price_out/1e6, in USD.
[[nodiscard]] double estimate_cost(const TokenUsage& usage, const ModelProfile& p);

} // namespace schemabridge
