#pragma once

#include "schemabridge/llm/client.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <random>

namespace schemabridge {

enum class FaultKind { DropField, Garbled, Timeout };

[[nodiscard]] std::string_view to_string(FaultKind k);
[[nodiscard]] std::optional<FaultKind> fault_kind_from_string(std::string_view text);

struct MockMode {
    enum class Type { Faithful, Faulty, Outage };
    Type type = Type::Faithful;
    FaultKind fault = FaultKind::Garbled;
    double rate = 0.0;

    static MockMode faithful() { return {}; }
    static MockMode faulty(FaultKind kind, double rate) { return {Type::Faulty, kind, rate}; }
    static MockMode outage() { return {Type::Outage, FaultKind::Timeout, 1.0}; }
};

/// Canned answers for one schema pair: the semantic findings and the field
/// mapping, both in their contract forms (lists of entries).
struct MockFixture {
    json semantic = json::array();
    json mapping = json::array();
};

/// Offline backend answering from fixtures keyed by the schema-hash pair.
/// Adapter and transform answers are derived from the mapping carried in
/// the request context, so they are always consistent with it. Fault
/// injection draws from a seeded generator.
class MockBackend final : public LlmBackend {
public:
    explicit MockBackend(MockMode mode = MockMode::faithful(), std::uint64_t seed = 42);

    void add_fixture(const SchemaPair& pair, MockFixture fixture);
    /// Reads every *.json file in `directory` holding "source_schema",
    /// "target_schema" and an "llm" section with "semantic" and "mapping".
    void load_fixtures(const std::filesystem::path& directory);
    [[nodiscard]] std::size_t fixture_count() const;

    /// Simulated service time per call.
    void set_latency(std::chrono::milliseconds latency) { latency_ = latency; }
    void set_mode(MockMode mode);

    LlmReply send(const LlmRequest& request) override;

    [[nodiscard]] int calls(ContractKind k) const noexcept { return counters_[static_cast<std::size_t>(k)].load(); }
    [[nodiscard]] int total_calls() const noexcept;
    void reset_counters() noexcept;

private:
    [[nodiscard]] json answer(const LlmRequest& request) const;
    [[nodiscard]] bool draw_fault(MockMode& mode);
    [[nodiscard]] std::size_t draw_index(std::size_t size);

    MockMode mode_;
    std::chrono::milliseconds latency_{0};
    mutable std::mutex mutex_;
    std::mt19937_64 rng_;
    std::map<SchemaPair, MockFixture> fixtures_;
    std::array<std::atomic<int>, kContractKinds> counters_{};
};

} // namespace schemabridge
