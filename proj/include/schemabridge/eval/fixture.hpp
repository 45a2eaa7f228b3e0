#pragma once

#include "schemabridge/core/errors.hpp"
#include "schemabridge/core/schema.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace schemabridge {

class FixtureError : public Error {
public:
    using Error::Error;
};

enum class Protocol { Rest, Iot, Graphql };

[[nodiscard]] std::string_view to_string(Protocol p);

struct ExpectedMismatch {
    std::optional<Path> source_path;
    std::optional<Path> target_path;
    std::string kind;  // mismatch kind name, or "aggregate"
};

/// A benchmark case. The optional "llm" section holds the canned answers
/// the offline backend gives for this schema pair.
struct ScenarioFixture {
    int id = 0;
    std::string slug;
    std::string name;
    Protocol protocol = Protocol::Rest;
    std::shared_ptr<const Schema> source_schema;
    std::shared_ptr<const Schema> target_schema;
    json input;
    json golden;
    std::vector<ExpectedMismatch> expected_mismatches;
    std::string notes;
    std::filesystem::path file;
};

/// Parses one fixture document and checks that the input validates against
/// the source schema and the golden output against the target schema.
/// Throws FixtureError.
[[nodiscard]] ScenarioFixture fixture_from_json(const json& document);
[[nodiscard]] ScenarioFixture load_fixture(const std::filesystem::path& file);
/// All NN_slug.json files of `directory`, ordered by id.
[[nodiscard]] std::vector<ScenarioFixture> load_fixtures(const std::filesystem::path& directory);

} // namespace schemabridge
