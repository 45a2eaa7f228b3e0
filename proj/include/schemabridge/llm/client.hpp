#pragma once

#include "schemabridge/core/schema.hpp"
#include "schemabridge/llm/errors.hpp"
#include "schemabridge/llm/profile.hpp"
#include "schemabridge/llm/prompts.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <utility>

namespace schemabridge {

/// The structured response shapes an LLM may be asked for. FieldMapping is
/// nested inside SchemaMapping.
enum class ContractKind { MismatchReport, SchemaMapping, AdapterProgram, TransformedData };

inline constexpr std::size_t kContractKinds = 4;

[[nodiscard]] std::string_view to_string(ContractKind k);
/// JSON Schema sent as the provider's structured-output format.
[[nodiscard]] const json& contract_schema(ContractKind k);

struct LlmRequest {
    ContractKind contract = ContractKind::MismatchReport;
    std::string prompt;
    json parameters;  // model and sampling parameters
    std::chrono::seconds timeout{60};
    SchemaPair pair;
    /// The prompt inputs in structured form ({source_schema, target_schema,
    /// mapping, data}); network backends ignore it.
    json context = json::object();
};

struct LlmReply {
    std::string content;
    TokenUsage usage;
};

/// Transport to a model. Throws Timeout or TransportError.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual LlmReply send(const LlmRequest& request) = 0;
};

/// Shareable client: profile adaptation, prompts, retry and an in-flight cap.
class LlmClient {
public:
    LlmClient(std::shared_ptr<LlmBackend> backend, ModelProfile profile, PromptSet prompts,
              std::ptrdiff_t max_in_flight = 16);

    [[nodiscard]] const ModelProfile& profile() const noexcept { return profile_; }
    [[nodiscard]] const PromptSet& prompts() const noexcept { return prompts_; }

    struct Raw {
        json value;
        TokenUsage usage;
    };

    /// Sends one request, retrying once on Timeout or TransportError, and
    /// returns the reply parsed as JSON. Unparseable content throws
    /// ContractViolation and is not retried.
    [[nodiscard]] Raw complete_json(ContractKind contract, std::string prompt, const SchemaPair& pair,
                                    json context) const;

private:
    std::shared_ptr<LlmBackend> backend_;
    ModelProfile profile_;
    PromptSet prompts_;
    std::unique_ptr<std::counting_semaphore<>> slots_;
};

/// Per-request view of a client that tallies calls and tokens. Safe to use
/// from the concurrent ensemble calls of one request.
class LlmSession {
public:
    explicit LlmSession(const LlmClient& client) : client_(client) {}

    [[nodiscard]] const LlmClient& client() const noexcept { return client_; }

    template <class T>
    struct Completion {
        T value;
        TokenUsage usage;
    };

    /// Calls the model and passes the JSON reply through `parse`, which
    /// enforces the contract by throwing ContractViolation.
    template <class Parse>
    auto complete_structured(ContractKind contract, std::string prompt, const SchemaPair& pair, json context,
                             Parse&& parse) -> Completion<decltype(parse(std::declval<const json&>()))> {
        calls_.fetch_add(1, std::memory_order_relaxed);
        try {
            auto raw = client_.complete_json(contract, std::move(prompt), pair, std::move(context));
            add_usage(raw.usage);
            return {parse(raw.value), raw.usage};
        } catch (const LlmFailure&) {
            failures_.fetch_add(1, std::memory_order_relaxed);
            throw;
        }
    }

    [[nodiscard]] int calls() const noexcept { return calls_.load(); }
    [[nodiscard]] int failures() const noexcept { return failures_.load(); }
    [[nodiscard]] TokenUsage usage() const noexcept { return {input_.load(), output_.load()}; }

private:
    void add_usage(const TokenUsage& u) {
        input_.fetch_add(u.input_tokens, std::memory_order_relaxed);
        output_.fetch_add(u.output_tokens, std::memory_order_relaxed);
    }

    const LlmClient& client_;
    std::atomic<int> calls_{0};
    std::atomic<int> failures_{0};
    std::atomic<std::int64_t> input_{0};
    std::atomic<std::int64_t> output_{0};
};

} // namespace schemabridge
