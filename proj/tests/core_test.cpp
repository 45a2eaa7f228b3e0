#include "schemabridge/core/errors.hpp"
#include "schemabridge/core/path.hpp"
#include "schemabridge/core/registry.hpp"
#include "schemabridge/core/schema.hpp"
#include "schemabridge/core/validate.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <random>

using namespace schemabridge;

namespace {

const json kWeatherV1 = json::parse(R"({
  "type": "object",
  "properties": {
    "city": {"type": "string"},
    "temperature_celsius": {"type": "number", "x-unit": "celsius"},
    "humidity_percent": {"type": "integer", "x-unit": "percent"},
    "wind_speed_kmh": {"type": "number", "x-unit": "km/h"},
    "timestamp": {"type": "string", "format": "date-time"}
  },
  "required": ["city", "temperature_celsius", "humidity_percent", "wind_speed_kmh", "timestamp"]
})");

std::string shuffled_text(const json& j, std::mt19937& rng) {
    std::function<nlohmann::ordered_json(const json&)> go = [&](const json& v) -> nlohmann::ordered_json {
        if (v.is_array()) {
            auto out = nlohmann::ordered_json::array();
            for (const auto& e : v) out.push_back(go(e));
            return out;
        }
        if (!v.is_object()) return nlohmann::ordered_json::parse(v.dump());
        std::vector<std::string> keys;
        for (auto it = v.begin(); it != v.end(); ++it) keys.push_back(it.key());
        std::shuffle(keys.begin(), keys.end(), rng);
        auto out = nlohmann::ordered_json::object();
        for (const auto& k : keys) out[k] = go(v.at(k));
        return out;
    };
    return go(j).dump(std::uniform_int_distribution<int>(-1, 3)(rng));
}

} // namespace

TEST(Path, ParsesAndRendersDottedForm) {
    const auto p = Path::parse("readings[].temperature");
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(p.segments()[0], "readings");
    EXPECT_TRUE(Path::is_marker(p.segments()[1]));
    EXPECT_EQ(p.str(), "readings[].temperature");
    EXPECT_EQ(p.leaf_name(), "temperature");
    EXPECT_EQ(p.without_markers().str(), "readings.temperature");
    EXPECT_EQ(Path::parse("tags[]").leaf_name(), "tags");
    EXPECT_EQ(Path::parse("a.b").child("c").str(), "a.b.c");
    EXPECT_EQ(Path::parse("tags").element().str(), "tags[]");
}

TEST(Path, RejectsMalformedText) {
    EXPECT_THROW((void)Path::parse("a..b"), PathError);
    EXPECT_THROW((void)Path::parse(".a"), PathError);
    EXPECT_THROW((void)Path::parse("a[b]"), PathError);
}

TEST(ParseSchema, MinimalObjectHasOneStringChild) {
    const auto s = parse_schema(R"({"type":"object","properties":{"a":{"type":"string"}}})");
    ASSERT_EQ(s.root().properties.size(), 1u);
    EXPECT_EQ(s.root().properties[0].name, "a");
    EXPECT_EQ(s.root().properties[0].node->kind, Kind::String);
}

TEST(ParseSchema, NonObjectRootIsMalformed) {
    EXPECT_THROW((void)parse_schema(R"({"type":"string"})"), MalformedSchema);
    EXPECT_THROW((void)parse_schema("not json"), MalformedSchema);
    EXPECT_THROW((void)parse_schema("[1,2]"), MalformedSchema);
}

TEST(ParseSchema, UnknownTypeIsUnsupported) {
    EXPECT_THROW((void)parse_schema(R"({"type":"object","properties":{"a":{"type":"decimal"}}})"), UnsupportedKind);
}

TEST(ParseSchema, UnsupportedKeywordsAreRecordedAsWarnings) {
    const auto s = parse_schema(R"({"type":"object","properties":{"a":{"type":"string"}},"allOf":[],"$ref":"#/x"})");
    EXPECT_EQ(s.warnings().size(), 2u);
}

TEST(ParseSchema, WeatherSourceHasFiveLeaves) {
    const auto s = schema_from_json(kWeatherV1);
    const std::set<Path> expected{Path::parse("city"), Path::parse("temperature_celsius"),
                                  Path::parse("humidity_percent"), Path::parse("wind_speed_kmh"),
                                  Path::parse("timestamp")};
    EXPECT_EQ(leaf_paths(s), expected);
    EXPECT_EQ(s.node_at(Path::parse("temperature_celsius"))->unit_hint, "celsius");
    EXPECT_EQ(s.node_at(Path::parse("timestamp"))->format_hint, "date-time");
}

TEST(CanonicalHash, EmptyObjectSchemaMatchesExternalDigest) {
    const auto s = parse_schema(R"({ "type" : "object", "properties" : { } })");
    EXPECT_EQ(s.canonical_text(), R"({"properties":{},"type":"object"})");
    EXPECT_EQ(canonical_hash(s).hex(), "efddc7bd8bbcef73a14eb1ace1ffdaec81e518ef1e13c1e9271d0b8acb694a49");
}

TEST(CanonicalHash, Sha256KnownVectors) {
    EXPECT_EQ(sha256("").hex(), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256("abc").hex(), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    const auto h = sha256("abc");
    EXPECT_EQ(SchemaHash::from_hex(h.hex()), h);
}

TEST(CanonicalHash, ChangingOneTypeChangesTheHash) {
    json changed = kWeatherV1;
    changed["properties"]["city"]["type"] = "integer";
    EXPECT_NE(canonical_hash(schema_from_json(kWeatherV1)), canonical_hash(schema_from_json(changed)));
}

TEST(CanonicalHash, InsensitiveToKeyOrderAndWhitespace) {
    std::mt19937 rng(7);
    const auto reference = canonical_hash(schema_from_json(kWeatherV1));
    for (const auto& f : test::fixtures()) {
        const auto ref_src = f.source_schema->hash();
        const auto ref_tgt = f.target_schema->hash();
        for (int i = 0; i < 20; ++i) {
            EXPECT_EQ(canonical_hash(parse_schema(shuffled_text(f.source_schema->document(), rng))), ref_src);
            EXPECT_EQ(canonical_hash(parse_schema(shuffled_text(f.target_schema->document(), rng))), ref_tgt);
        }
    }
    for (int i = 0; i < 50; ++i) EXPECT_EQ(canonical_hash(parse_schema(shuffled_text(kWeatherV1, rng))), reference);
}

TEST(CanonicalHash, NumbersUseShortestRoundTripForm) {
    const auto a = parse_schema(R"({"type":"object","properties":{"a":{"type":"number","enum":[1.50, 2e1]}}})");
    EXPECT_NE(a.canonical_text().find("[1.5,20.0]"), std::string::npos) << a.canonical_text();
}

TEST(LeafPaths, FlatNestedArrayAndEmpty) {
    EXPECT_EQ(leaf_paths(parse_schema(R"({"type":"object","properties":{"a":{"type":"string"},"b":{"type":"integer"}}})")),
              (std::set<Path>{Path::parse("a"), Path::parse("b")}));
    EXPECT_TRUE(leaf_paths(parse_schema(R"({"type":"object","properties":{}})")).empty());
    const std::set<Path> v2{Path::parse("location.name"), Path::parse("measurements.temp_f"),
                            Path::parse("measurements.humidity"), Path::parse("measurements.wind_mph"),
                            Path::parse("recorded_at")};
    EXPECT_EQ(leaf_paths(*test::fixture(1).target_schema), v2);
    EXPECT_EQ(leaf_paths(*test::fixture(4).source_schema),
              (std::set<Path>{Path::parse("readings[].sensor"), Path::parse("readings[].temperature"),
                              Path::parse("station_id")}));
    EXPECT_EQ(leaf_paths(*test::fixture(9).source_schema),
              (std::set<Path>{Path::parse("price"), Path::parse("sku"), Path::parse("tags[]")}));
}

TEST(LeafPaths, AreExactlyWhereValidationChecksScalars) {
    // Replacing the value at any leaf with a value of the wrong kind must
    // produce a violation at that same path.
    for (const auto& f : test::fixtures()) {
        for (const auto& leaf : leaves(*f.target_schema)) {
            json doc = f.golden;
            Path concrete;
            for (const auto& seg : leaf.path.segments()) {
                concrete = Path::is_marker(seg) ? concrete.child("0") : concrete.child(seg);
            }
            json* cursor = &doc;
            bool present = true;
            for (const auto& seg : concrete.segments()) {
                if (cursor->is_array()) {
                    const auto idx = std::stoul(seg);
                    if (idx >= cursor->size()) { present = false; break; }
                    cursor = &(*cursor)[idx];
                } else if (cursor->is_object() && cursor->contains(seg)) {
                    cursor = &(*cursor)[seg];
                } else {
                    present = false;
                    break;
                }
            }
            if (!present) continue;
            *cursor = leaf.node->kind == Kind::Object ? json("x") : json::object();
            const auto v = validate_instance(doc, *f.target_schema);
            ASSERT_FALSE(v.empty()) << f.slug << " " << leaf.path.str();
            EXPECT_EQ(v.front().path.without_markers().str(), leaf.path.without_markers().str())
                << f.slug << " " << v.front().path.str();
        }
    }
}

TEST(Validate, IntegralFloatsSatisfyInteger) {
    const auto s = parse_schema(R"({"type":"object","properties":{"n":{"type":"integer"}},"required":["n"]})");
    EXPECT_TRUE(validate_instance(json::parse(R"({"n":3.0})"), s).empty());
    EXPECT_FALSE(validate_instance(json::parse(R"({"n":3.5})"), s).empty());
    EXPECT_FALSE(validate_instance(json::parse(R"({})"), s).empty());
    EXPECT_FALSE(validate_instance(json::parse(R"({"n":"3"})"), s).empty());
}

TEST(Validate, EnumAndNestedRequired) {
    const auto& target = *test::fixture(8).target_schema;
    EXPECT_TRUE(validate_instance(test::fixture(8).golden, target).empty());
    json bad = test::fixture(8).golden;
    bad["currency"] = "GBP";
    ASSERT_EQ(validate_instance(bad, target).size(), 1u);
    EXPECT_EQ(validate_instance(bad, target)[0].path.str(), "currency");
}

namespace {

RouteConfig route(std::string pattern, std::set<Method> methods = {Method::Post}) {
    static const auto s = std::make_shared<const Schema>(parse_schema(R"({"type":"object","properties":{}})"));
    RouteConfig r;
    r.path_pattern = std::move(pattern);
    r.methods = std::move(methods);
    r.source_schema = s;
    r.target_schema = s;
    return r;
}

} // namespace

TEST(MatchRoute, ExactBeatsPrefix) {
    SchemaRegistry reg;
    reg.add(route("/api/weather"));
    reg.add(route("/api"));
    const auto* m = match_route(reg, "POST", "/api/weather");
    ASSERT_NE(m, nullptr);
    EXPECT_EQ(m->path_pattern, "/api/weather");
}

TEST(MatchRoute, LongestPrefixWins) {
    SchemaRegistry reg;
    reg.add(route("/api"));
    reg.add(route("/api/weather"));
    const auto* m = match_route(reg, "POST", "/api/weather/today");
    ASSERT_NE(m, nullptr);
    EXPECT_EQ(m->path_pattern, "/api/weather");
}

TEST(MatchRoute, NoMatchMeansPassthrough) {
    SchemaRegistry reg;
    reg.add(route("/api/weather"));
    EXPECT_EQ(match_route(reg, "POST", "/health"), nullptr);
    EXPECT_EQ(match_route(reg, "GET", "/api/weather"), nullptr);
    EXPECT_EQ(match_route(reg, "POST", "/api/weatherstation"), nullptr);
    EXPECT_NE(match_route(reg, "POST", "/api/weather?units=metric"), nullptr);
}

TEST(MatchRoute, MethodFiltersCandidates) {
    SchemaRegistry reg;
    reg.add(route("/api/weather", {Method::Put}));
    reg.add(route("/api", {Method::Post}));
    const auto* m = match_route(reg, "POST", "/api/weather");
    ASSERT_NE(m, nullptr);
    EXPECT_EQ(m->path_pattern, "/api");
}

TEST(MatchRoute, AgreesWithBruteForceOverRandomRegistries) {
    std::mt19937 rng(11);
    const std::vector<std::string> segs{"a", "b", "api", "v1"};
    auto random_path = [&](int max_len) {
        std::string p;
        const int len = std::uniform_int_distribution<int>(1, max_len)(rng);
        for (int i = 0; i < len; ++i) p += "/" + segs[rng() % segs.size()];
        return p;
    };
    auto is_segment_prefix = [](const std::string& pattern, const std::string& path) {
        if (path.compare(0, pattern.size(), pattern) != 0) return false;
        return path.size() == pattern.size() || path[pattern.size()] == '/' || pattern.back() == '/';
    };
    for (int trial = 0; trial < 500; ++trial) {
        SchemaRegistry reg;
        std::set<std::string> patterns;
        const int n = std::uniform_int_distribution<int>(1, 6)(rng);
        for (int i = 0; i < n; ++i) patterns.insert(random_path(3));
        for (const auto& p : patterns) reg.add(route(p));
        const std::string path = random_path(4);
        const RouteConfig* expected = nullptr;
        for (const auto& r : reg.routes) {
            if (r.path_pattern == path) {
                expected = &r;
                break;
            }
            if (is_segment_prefix(r.path_pattern, path) &&
                (expected == nullptr || r.path_pattern.size() > expected->path_pattern.size())) {
                expected = &r;
            }
        }
        EXPECT_EQ(match_route(reg, "POST", path), expected) << path;
    }
}

TEST(Registry, DuplicatePatternAndMethodRejected) {
    SchemaRegistry reg;
    reg.add(route("/api/weather", {Method::Post}));
    reg.add(route("/api/weather", {Method::Put}));
    EXPECT_THROW(reg.add(route("/api/weather", {Method::Post})), ConfigError);
}

TEST(LoadRegistry, WeatherConfigFile) {
    const auto reg = load_registry_file(test::data_dir() / "weather" / "registry.json");
    ASSERT_EQ(reg.routes.size(), 1u);
    const auto& r = reg.routes.front();
    EXPECT_EQ(r.path_pattern, "/api/weather");
    EXPECT_EQ(r.methods, (std::set<Method>{Method::Post, Method::Put, Method::Patch}));
    EXPECT_EQ(r.strategy, Strategy::Codegen);
    EXPECT_TRUE(r.safeguards_enabled);
    // The served schemas are the walkthrough fixture's schemas.
    EXPECT_EQ(r.schema_pair(), (SchemaPair{test::fixture(1).source_schema->hash(),
                                           test::fixture(1).target_schema->hash()}));
}

TEST(LoadRegistry, InlineSchemasUnitsAndErrors) {
    const json inline_schema = {{"type", "object"}, {"properties", json::object()}};
    json doc = {{"routes", json::array({{{"path", "/x"},
                                         {"methods", {"POST"}},
                                         {"source_schema", inline_schema},
                                         {"target_schema", inline_schema},
                                         {"strategy", "DIRECT"}}})},
                {"units", json::array({{{"from", "bar"}, {"to", "psi"}, {"scale", 14.5038}}})}};
    const auto reg = load_registry(doc);
    ASSERT_EQ(reg.routes.size(), 1u);
    EXPECT_EQ(reg.routes[0].strategy, Strategy::Direct);
    ASSERT_EQ(reg.units.size(), 1u);

    json dup = doc;
    dup["routes"].push_back(doc["routes"][0]);
    EXPECT_THROW((void)load_registry(dup), ConfigError);

    json bad_strategy = doc;
    bad_strategy["routes"][0]["strategy"] = "MAGIC";
    EXPECT_THROW((void)load_registry(bad_strategy), ConfigError);

    json bad_method = doc;
    bad_method["routes"][0]["methods"] = {"DELETE"};
    EXPECT_THROW((void)load_registry(bad_method), ConfigError);
}

TEST(LoadRegistry, UnparseableSchemaFileIsNamed) {
    const auto dir = std::filesystem::temp_directory_path() / "sb_core_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "broken.json") << "{ not json";
    const json doc = {{"routes", json::array({{{"path", "/x"},
                                               {"methods", {"POST"}},
                                               {"source_schema", "broken.json"},
                                               {"target_schema", "broken.json"}}})}};
    try {
        (void)load_registry(doc, dir);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("broken.json"), std::string::npos) << e.what();
        EXPECT_NE(std::string(e.what()).find("routes[0]"), std::string::npos) << e.what();
    }
}
