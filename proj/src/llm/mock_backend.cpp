#include "schemabridge/llm/mock_backend.hpp"

#include "schemabridge/resolve/adapter.hpp"
#include "schemabridge/resolve/mapping.hpp"

#include <fstream>
#include <thread>

namespace schemabridge {

std::string_view to_string(FaultKind k) {
    switch (k) {
    case FaultKind::DropField: return "drop_field";
    case FaultKind::Garbled: return "garbled";
    case FaultKind::Timeout: return "timeout";
    }
    return "?";
}

std::optional<FaultKind> fault_kind_from_string(std::string_view text) {
    if (text == "drop_field") return FaultKind::DropField;
    if (text == "garbled") return FaultKind::Garbled;
    if (text == "timeout") return FaultKind::Timeout;
    return std::nullopt;
}

MockBackend::MockBackend(MockMode mode, std::uint64_t seed) : mode_(mode), rng_(seed) {}

void MockBackend::add_fixture(const SchemaPair& pair, MockFixture fixture) {
    std::lock_guard lock(mutex_);
    fixtures_[pair] = std::move(fixture);
}

void MockBackend::load_fixtures(const std::filesystem::path& directory) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(directory)) throw ConfigError("fixture directory not found: " + directory.string());
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path());
        json doc = json::parse(in, nullptr, false);
        if (doc.is_discarded() || !doc.is_object() || !doc.contains("llm")) continue;
        try {
            const Schema source = schema_from_json(doc.at("source_schema"));
            const Schema target = schema_from_json(doc.at("target_schema"));
            const json& llm = doc.at("llm");
            add_fixture({source.hash(), target.hash()},
                        {llm.value("semantic", json::array()), llm.value("mapping", json::array())});
        } catch (const std::exception& e) {
            throw ConfigError(entry.path().filename().string() + ": " + e.what());
        }
    }
}

std::size_t MockBackend::fixture_count() const {
    std::lock_guard lock(mutex_);
    return fixtures_.size();
}

void MockBackend::set_mode(MockMode mode) {
    std::lock_guard lock(mutex_);
    mode_ = mode;
}

int MockBackend::total_calls() const noexcept {
    int total = 0;
    for (const auto& c : counters_) total += c.load();
    return total;
}

void MockBackend::reset_counters() noexcept {
    for (auto& c : counters_) c.store(0);
}

bool MockBackend::draw_fault(MockMode& mode) {
    std::lock_guard lock(mutex_);
    mode = mode_;
    if (mode_.type == MockMode::Type::Faithful) return false;
    if (mode_.type == MockMode::Type::Outage) return true;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < mode_.rate;
}

std::size_t MockBackend::draw_index(std::size_t size) {
    std::lock_guard lock(mutex_);
    return static_cast<std::size_t>(rng_() % size);
}

namespace {

// Executes the mapping one entry at a time so that a failing entry only
// loses its own field, like a model that gets one value wrong.
json transform_with(const SchemaMapping& mapping, const json& data) {
    json out = json::object();
    for (const auto& f : mapping.fields) {
        try {
            AdapterProgram single = compile_mapping(SchemaMapping{mapping.pair, {f}});
            for (const auto& a : single.assignments) set_path(out, a.target, evaluate(*a.expr, data));
        } catch (const Error&) {
        }
    }
    return out;
}

} // namespace

json MockBackend::answer(const LlmRequest& request) const {
    const bool same_schema = request.pair.first == request.pair.second;
    const MockFixture* fixture = nullptr;
    {
        std::lock_guard lock(mutex_);
        auto it = fixtures_.find(request.pair);
        if (it != fixtures_.end()) fixture = &it->second;
    }
    const json& ctx = request.context;

    switch (request.contract) {
    case ContractKind::MismatchReport:
        if (fixture) return {{"mismatches", fixture->semantic}};
        if (same_schema) return {{"mismatches", json::array()}};
        break;
    case ContractKind::SchemaMapping:
        if (fixture) return {{"mappings", fixture->mapping}};
        if (same_schema && ctx.contains("source_schema")) {
            const Schema s = schema_from_json(ctx.at("source_schema"));
            return to_json(identity_mapping(s, s));
        }
        break;
    case ContractKind::AdapterProgram: {
        const SchemaMapping m = mapping_from_json(ctx.value("mapping", json::object()), request.pair);
        return to_json(compile_mapping(m));
    }
    case ContractKind::TransformedData: {
        const SchemaMapping m = mapping_from_json(ctx.value("mapping", json::object()), request.pair);
        return {{"data", transform_with(m, ctx.value("data", json::object()))}};
    }
    }
    throw MissingFixture("no mock fixture for schema pair " + request.pair.first.hex().substr(0, 12) + "/" +
                         request.pair.second.hex().substr(0, 12));
}

LlmReply MockBackend::send(const LlmRequest& request) {
    counters_[static_cast<std::size_t>(request.contract)].fetch_add(1);
    if (latency_.count() > 0) std::this_thread::sleep_for(latency_);

    MockMode mode;
    const bool fault = draw_fault(mode);
    if (fault && (mode.type == MockMode::Type::Outage || mode.fault == FaultKind::Timeout))
        throw Timeout("mock backend timed out");

    json value = answer(request);
    std::string content;
    if (fault && mode.fault == FaultKind::Garbled) {
        content = value.dump();
        content.resize(content.size() / 2);
    } else {
        if (fault) {
            static constexpr std::array<const char*, kContractKinds> lists = {"mismatches", "mappings", "assignments",
                                                                              "data"};
            json& list = value[lists[static_cast<std::size_t>(request.contract)]];
            if (list.is_array() && !list.empty()) {
                list.erase(list.begin() + static_cast<std::ptrdiff_t>(draw_index(list.size())));
            } else if (list.is_object() && !list.empty()) {
                auto it = list.begin();
                std::advance(it, static_cast<std::ptrdiff_t>(draw_index(list.size())));
                list.erase(it);
            }
        }
        content = value.dump();
    }
    const auto tokens = [](std::size_t bytes) { return static_cast<std::int64_t>(bytes / 4 + 1); };
    return {std::move(content), {tokens(request.prompt.size()), tokens(value.dump().size())}};
}

} // namespace schemabridge
