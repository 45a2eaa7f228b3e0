#include "schemabridge/llm/errors.hpp"
#include "schemabridge/resolve/adapter.hpp"
#include "schemabridge/resolve/builtins.hpp"
#include "schemabridge/resolve/mapping.hpp"
#include "schemabridge/eval/metrics.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <future>

using namespace schemabridge;

namespace {

SchemaMapping fixture_mapping(const ScenarioFixture& f) {
    const json doc = json::parse(std::ifstream(f.file))["llm"];
    return mapping_from_json({{"mappings", doc["mapping"]}}, {f.source_schema->hash(), f.target_schema->hash()});
}

AdapterProgram walkthrough_program() {
    return adapter_from_json(json::parse(R"({"assignments":[
      {"target":"location.name","expr":{"kind":"get","path":"city"}},
      {"target":"measurements.temp_f","expr":{"kind":"call","fn":"celsius_to_fahrenheit","args":[{"kind":"get","path":"temperature_celsius"}]}},
      {"target":"measurements.humidity","expr":{"kind":"call","fn":"to_float","args":[{"kind":"get","path":"humidity_percent"}]}},
      {"target":"measurements.wind_mph","expr":{"kind":"call","fn":"kmh_to_mph","args":[{"kind":"get","path":"wind_speed_kmh"}]}},
      {"target":"recorded_at","expr":{"kind":"call","fn":"iso8601_to_epoch","args":[{"kind":"get","path":"timestamp"}]}}
    ]})"));
}

} // namespace

TEST(Adapter, WalkthroughValidatesAndMatchesGolden) {
    const auto& f = test::fixture(1);
    const auto v = validate_adapter(walkthrough_program(), *f.source_schema, *f.target_schema, f.input);
    const json out = execute_adapter(v, f.input);
    EXPECT_TRUE(compare_outputs(out, f.golden).pass) << out.dump();
    EXPECT_EQ(out["measurements"]["temp_f"].get<double>(), 65.3);
    EXPECT_EQ(out["recorded_at"], 1782225000);
    EXPECT_EQ(out["location"]["name"], "Amsterdam");
    EXPECT_TRUE(out["measurements"]["humidity"].is_number_float());
}

TEST(Adapter, EmptyProgramGivesEmptyObject) {
    EXPECT_EQ(execute_program(AdapterProgram{}, json::parse(R"({"a":1})")), json::object());
}

TEST(Adapter, GetOnMissingSourcePathIsStaticViolation) {
    const auto& f = test::fixture(1);
    auto p = walkthrough_program();
    p.assignments[0].expr = make_get(Path::parse("town"));
    EXPECT_THROW((void)validate_adapter(p, *f.source_schema, *f.target_schema, f.input), StaticViolation);
}

TEST(Adapter, UnknownTargetFunctionAndArityAreStaticViolations) {
    const auto& f = test::fixture(1);
    auto bad_target = walkthrough_program();
    bad_target.assignments[0].target = Path::parse("location.city");
    EXPECT_THROW(check_adapter_static(bad_target, *f.source_schema, *f.target_schema), StaticViolation);

    auto bad_fn = walkthrough_program();
    bad_fn.assignments[0].expr = make_call("system", {make_get(Path::parse("city"))});
    try {
        check_adapter_static(bad_fn, *f.source_schema, *f.target_schema);
        FAIL();
    } catch (const StaticViolation& e) {
        EXPECT_NE(std::string(e.what()).find("system"), std::string::npos);
    }

    auto bad_arity = walkthrough_program();
    bad_arity.assignments[1].expr = make_call("round", {make_get(Path::parse("temperature_celsius"))});
    EXPECT_THROW(check_adapter_static(bad_arity, *f.source_schema, *f.target_schema), StaticViolation);
}

TEST(Adapter, StringIntoIntegerLeafFailsTheTrial) {
    const auto& f = test::fixture(1);
    auto p = walkthrough_program();
    p.assignments[4].expr = make_get(Path::parse("timestamp"));
    EXPECT_THROW((void)validate_adapter(p, *f.source_schema, *f.target_schema, f.input), TrialFailure);
}

TEST(Adapter, RuntimeErrorInTrialIsTrialFailure) {
    const auto& f = test::fixture(1);
    json sample = f.input;
    sample["timestamp"] = "not-a-date";
    EXPECT_THROW((void)validate_adapter(walkthrough_program(), *f.source_schema, *f.target_schema, sample),
                 TrialFailure);
}

TEST(Adapter, EvalErrorAtExecution) {
    const auto& f = test::fixture(1);
    const auto v = restore_adapter(walkthrough_program(), *f.source_schema, *f.target_schema);
    json bad = f.input;
    bad["timestamp"] = "not-a-date";
    EXPECT_THROW((void)execute_adapter(v, bad), EvalError);
}

TEST(Adapter, JsonFormRoundTrips) {
    const auto p = walkthrough_program();
    EXPECT_EQ(to_json(adapter_from_json(to_json(p))), to_json(p));
    EXPECT_THROW((void)adapter_from_json(json::parse(R"({"assignments":{}})")), ExprSyntaxError);
    EXPECT_THROW((void)adapter_from_json(json::parse(R"({"assignments":[{"target":"a"}]})")), ExprSyntaxError);
}

TEST(Adapter, EveryFixtureMappingCompilesToAGoldenAdapter) {
    for (const auto& f : test::fixtures()) {
        auto mapping = fixture_mapping(f);
        normalize_mapping(mapping, *f.target_schema);
        const auto v = validate_adapter(compile_mapping(mapping), *f.source_schema, *f.target_schema, f.input);
        const json out = execute_adapter(v, f.input);
        EXPECT_TRUE(compare_outputs(out, f.golden).pass) << f.slug << ": " << out.dump();
        // Every written leaf is a target leaf.
        const auto targets = leaf_paths(*f.target_schema);
        for (const auto& [path, values] : leaf_values(out)) {
            EXPECT_TRUE(targets.contains(Path::parse(path))) << f.slug << " wrote " << path;
        }
    }
}

TEST(Adapter, DeterministicAcrossRepeatsAndThreads) {
    std::vector<std::pair<std::shared_ptr<const ValidatedAdapter>, const ScenarioFixture*>> adapters;
    for (const auto& f : test::fixtures()) {
        auto mapping = fixture_mapping(f);
        normalize_mapping(mapping, *f.target_schema);
        adapters.emplace_back(std::make_shared<const ValidatedAdapter>(
                                  restore_adapter(compile_mapping(mapping), *f.source_schema, *f.target_schema)),
                              &f);
    }
    std::vector<std::string> reference;
    for (const auto& [a, f] : adapters) reference.push_back(execute_adapter(*a, f->input).dump());
    std::vector<std::future<bool>> tasks;
    for (int t = 0; t < 8; ++t) {
        tasks.push_back(std::async(std::launch::async, [&] {
            for (int rep = 0; rep < 50; ++rep) {
                for (std::size_t i = 0; i < adapters.size(); ++i) {
                    if (execute_adapter(*adapters[i].first, adapters[i].second->input).dump() != reference[i]) {
                        return false;
                    }
                }
            }
            return true;
        }));
    }
    for (auto& t : tasks) EXPECT_TRUE(t.get());
}

TEST(Paths, GetAndSetWithArrays) {
    const json data = json::parse(R"({"readings":[{"t":1},{"t":2},{}],"tags":["a","b"]})");
    EXPECT_EQ(get_path(data, Path::parse("readings[].t")), json::parse("[1,2,null]"));
    EXPECT_EQ(get_path(data, Path::parse("tags[]")), json::parse(R"(["a","b"])"));
    EXPECT_TRUE(get_path(data, Path::parse("tags.x")).is_null());

    json out = json::object();
    set_path(out, Path::parse("a.b"), 1);
    set_path(out, Path::parse("a.c"), "x");
    set_path(out, Path::parse("list[]"), 5);
    set_path(out, Path::parse("rows[].v"), json::array({1, 2}));
    set_path(out, Path::parse("skip"), nullptr);
    EXPECT_EQ(out, json::parse(R"({"a":{"b":1,"c":"x"},"list":[5],"rows":[{"v":1},{"v":2}]})"));
    EXPECT_THROW(set_path(out, Path::parse("rows[].w"), 3), EvalError);
}

TEST(Mapping, ContractParsingAndNormalisation) {
    const auto& f = test::fixture(1);
    const SchemaPair pair{f.source_schema->hash(), f.target_schema->hash()};
    const json doc = json::parse(R"J({"mappings":[
      {"source_path":"city","target_path":"location.name","transform":"$","confidence":0.5},
      {"source_path":"city","target_path":"location.name","transform":"upper($)","confidence":0.9},
      {"source_path":"city","target_path":"not.a.leaf","transform":"$","confidence":1.0},
      {"source_path":null,"target_path":"recorded_at","transform":"0","confidence":0.8}
    ]})J");
    auto m = mapping_from_json(doc, pair);
    EXPECT_EQ(m.fields.size(), 4u);
    normalize_mapping(m, *f.target_schema);
    ASSERT_EQ(m.fields.size(), 2u);
    EXPECT_EQ(m.for_target(Path::parse("location.name"))->transform, "upper($)");
    EXPECT_FALSE(m.for_target(Path::parse("recorded_at"))->source_path.has_value());
    EXPECT_DOUBLE_EQ(m.min_confidence(), 0.8);
    EXPECT_EQ(mapping_from_json(to_json(m), pair).fields, m.fields);

    EXPECT_THROW((void)mapping_from_json(json::parse(R"({"mappings":[{"source_path":"a","target_path":"b","transform":"$","confidence":1.5}]})"), pair),
                 ContractViolation);
    EXPECT_THROW((void)mapping_from_json(json::parse(R"({"mappings":[{"source_path":"a","target_path":"b","transform":"1 +","confidence":1}]})"), pair),
                 ContractViolation);
    EXPECT_THROW((void)mapping_from_json(json::parse(R"({"mappings":{}})"), pair), ContractViolation);
}

TEST(Mapping, IdentityOverCommonLeaves) {
    const auto& s = *test::fixture(6).source_schema;
    const auto m = identity_mapping(s, s);
    EXPECT_EQ(m.fields.size(), leaf_paths(s).size());
    for (const auto& fm : m.fields) {
        EXPECT_EQ(fm.source_path, fm.target_path);
        EXPECT_EQ(fm.confidence, 1.0);
    }
    const auto p = compile_mapping(m);
    ASSERT_EQ(p.assignments.size(), m.fields.size());
    for (const auto& a : p.assignments) {
        const auto* g = std::get_if<expr::Get>(&a.expr->node);
        ASSERT_NE(g, nullptr);
        EXPECT_EQ(g->path, a.target);
    }
    const json in = test::fixture(6).input;
    EXPECT_EQ(execute_program(p, in), in);
}

TEST(Mapping, CompileTurnsDollarIntoSourceGet) {
    SchemaMapping m;
    m.fields.push_back({Path::parse("timestamp"), Path::parse("recorded_at"), "iso8601_to_epoch($)", 0.9});
    m.fields.push_back({std::nullopt, Path::parse("currency"), "\"EUR\"", 0.8});
    const auto p = compile_mapping(m);
    ASSERT_EQ(p.assignments.size(), 2u);
    EXPECT_EQ(render(*p.assignments[0].expr), "iso8601_to_epoch($timestamp)");
    EXPECT_EQ(render(*p.assignments[1].expr), "\"EUR\"");
    m.fields.push_back({std::nullopt, Path::parse("x"), "$", 0.8});
    EXPECT_THROW((void)compile_mapping(m), ExprSyntaxError);
}
