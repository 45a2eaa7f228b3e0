#pragma once

#include "schemabridge/llm/client.hpp"

#include <string>

namespace schemabridge {

struct Endpoint {
    std::string base_url;  // e.g. https://api.openai.com/v1
    std::string api_key;
};

/// Reads <PROVIDER>_API_KEY and <PROVIDER>_BASE_URL (provider upper-cased).
/// Known providers have a default base URL; throws ConfigError when the key
/// or an unknown provider's URL is missing.
[[nodiscard]] Endpoint endpoint_from_env(std::string_view provider);

/// Request body in the chat-completions convention, asking for the
/// contract's JSON shape as structured output.
[[nodiscard]] json chat_request_body(const LlmRequest& request);

/// Chat-completions backend over HTTP(S).
class LiveBackend final : public LlmBackend {
public:
    explicit LiveBackend(Endpoint endpoint);

    LlmReply send(const LlmRequest& request) override;

private:
    std::string origin_;  // scheme://host[:port]
    std::string prefix_;  // path before /chat/completions
    std::string api_key_;
};

} // namespace schemabridge
