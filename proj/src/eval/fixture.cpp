#include "schemabridge/eval/fixture.hpp"

#include "schemabridge/core/validate.hpp"

#include <algorithm>
#include <fstream>
#include <regex>

namespace schemabridge {

std::string_view to_string(Protocol p) {
    switch (p) {
    case Protocol::Rest: return "rest";
    case Protocol::Iot: return "iot";
    case Protocol::Graphql: return "graphql";
    }
    return "rest";
}

namespace {

Protocol protocol_from(const std::string& text) {
    if (text == "rest") return Protocol::Rest;
    if (text == "iot") return Protocol::Iot;
    if (text == "graphql") return Protocol::Graphql;
    throw FixtureError("unknown protocol '" + text + "'");
}

std::optional<Path> optional_path(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return Path::parse(it->get<std::string>());
}

std::string describe(const std::vector<Violation>& v) {
    std::string out;
    for (const auto& x : v) out += " " + (x.path.empty() ? std::string("<root>") : x.path.str()) + ": " + x.reason + ";";
    return out;
}

} // namespace

ScenarioFixture fixture_from_json(const json& doc) {
    ScenarioFixture f;
    try {
        f.id = doc.at("id").get<int>();
        f.slug = doc.at("slug").get<std::string>();
        f.name = doc.at("name").get<std::string>();
        f.protocol = protocol_from(doc.at("protocol").get<std::string>());
        f.source_schema = std::make_shared<const Schema>(schema_from_json(doc.at("source_schema")));
        f.target_schema = std::make_shared<const Schema>(schema_from_json(doc.at("target_schema")));
        f.input = doc.at("input");
        f.golden = doc.at("golden");
        f.notes = doc.value("notes", "");
        for (const auto& e : doc.at("expected_mismatches")) {
            f.expected_mismatches.push_back(
                {optional_path(e, "source_path"), optional_path(e, "target_path"), e.at("kind").get<std::string>()});
        }
    } catch (const FixtureError&) {
        throw;
    } catch (const std::exception& e) {
        throw FixtureError(std::string("malformed fixture: ") + e.what());
    }
    const std::string label = "fixture " + std::to_string(f.id) + " (" + f.slug + ")";
    if (!f.input.is_object() || !f.golden.is_object()) throw FixtureError(label + ": input and golden must be objects");
    if (auto v = validate_instance(f.input, *f.source_schema); !v.empty())
        throw FixtureError(label + ": input does not match the source schema:" + describe(v));
    if (auto v = validate_instance(f.golden, *f.target_schema); !v.empty())
        throw FixtureError(label + ": golden output does not match the target schema:" + describe(v));
    return f;
}

ScenarioFixture load_fixture(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw FixtureError("cannot open " + file.string());
    const json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw FixtureError(file.filename().string() + ": invalid JSON");
    try {
        ScenarioFixture f = fixture_from_json(doc);
        f.file = file;
        return f;
    } catch (const FixtureError& e) {
        throw FixtureError(file.filename().string() + ": " + e.what());
    }
}

std::vector<ScenarioFixture> load_fixtures(const std::filesystem::path& directory) {
    if (!std::filesystem::is_directory(directory)) throw FixtureError("not a directory: " + directory.string());
    static const std::regex name_pattern(R"(\d\d_[a-z0-9_]+\.json)");
    std::vector<ScenarioFixture> out;
    for (const auto& entry : std::filesystem::directory_iterator(directory)) {
        const std::string name = entry.path().filename().string();
        if (std::regex_match(name, name_pattern)) out.push_back(load_fixture(entry.path()));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

} // namespace schemabridge
