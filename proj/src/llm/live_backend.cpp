#include "schemabridge/llm/live_backend.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace schemabridge {

Endpoint endpoint_from_env(std::string_view provider) {
    std::string upper(provider);
    std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
    const auto env = [](const std::string& name) -> std::string {
        const char* v = std::getenv(name.c_str());
        return v ? v : "";
    };
    Endpoint ep{env(upper + "_BASE_URL"), env(upper + "_API_KEY")};
    if (ep.base_url.empty()) {
        if (provider == "openai") ep.base_url = "https://api.openai.com/v1";
        else if (provider == "xai") ep.base_url = "https://api.x.ai/v1";
        else throw ConfigError(upper + "_BASE_URL is not set");
    }
    if (ep.api_key.empty()) throw ConfigError(upper + "_API_KEY is not set");
    return ep;
}

json chat_request_body(const LlmRequest& request) {
    json body = request.parameters.is_object() ? request.parameters : json::object();
    body["messages"] = json::array({{{"role", "user"}, {"content", request.prompt}}});
    body["response_format"] = {{"type", "json_schema"},
                               {"json_schema",
                                {{"name", std::string(to_string(request.contract))},
                                 {"schema", contract_schema(request.contract)},
                                 {"strict", false}}}};
    return body;
}

LiveBackend::LiveBackend(Endpoint endpoint) : api_key_(std::move(endpoint.api_key)) {
    const std::string& url = endpoint.base_url;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("base URL needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
}

LlmReply LiveBackend::send(const LlmRequest& request) {
    httplib::Client client(origin_);
    const auto seconds = static_cast<time_t>(request.timeout.count());
    client.set_connection_timeout(std::min<time_t>(seconds, 10), 0);
    client.set_read_timeout(seconds, 0);
    client.set_write_timeout(seconds, 0);
    client.set_bearer_token_auth(api_key_);

    auto result = client.Post(prefix_ + "/chat/completions", chat_request_body(request).dump(), "application/json");
    if (!result) {
        const auto err = result.error();
        if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout)
            throw Timeout("LLM request timed out after " + std::to_string(seconds) + " s");
        throw TransportError("LLM request failed: " + httplib::to_string(err));
    }
    if (result->status != 200)
        throw TransportError("LLM endpoint returned HTTP " + std::to_string(result->status));

    const json reply = json::parse(result->body, nullptr, false);
    if (reply.is_discarded()) throw ContractViolation("LLM endpoint returned a non-JSON body");
    try {
        LlmReply out;
        out.content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
        if (const auto u = reply.find("usage"); u != reply.end() && u->is_object()) {
            out.usage.input_tokens = u->value("prompt_tokens", std::int64_t{0});
            out.usage.output_tokens = u->value("completion_tokens", std::int64_t{0});
        }
        return out;
    } catch (const json::exception& e) {
        throw ContractViolation(std::string("unexpected chat-completions reply: ") + e.what());
    }
}

} // namespace schemabridge
