#include "schemabridge/core/validate.hpp"
#include "schemabridge/safeguard/fallback.hpp"
#include "schemabridge/safeguard/similarity.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace schemabridge;

TEST(Fallback, SensorRenameWithUnitConversion) {
    const auto& f = test::fixture(2);
    const json out = fallback_transform(f.input, *f.source_schema, *f.target_schema);
    EXPECT_EQ(out, json::parse(R"({"sensor_id":"s1","temp_f":69.8})")) << out.dump();
    EXPECT_TRUE(validate_instance(out, *f.target_schema).empty());
}

TEST(Fallback, PairingForSensorScenario) {
    const auto& f = test::fixture(2);
    const auto pairs = fallback_pairing(*f.source_schema, *f.target_schema);
    ASSERT_EQ(pairs.size(), 2u);
    EXPECT_EQ(pairs[0].source.str(), "device_id");
    EXPECT_EQ(pairs[0].target.str(), "sensor_id");
    EXPECT_EQ(pairs[1].source.str(), "device_temp_c");
    EXPECT_EQ(pairs[1].target.str(), "temp_f");
}

TEST(Fallback, IdentityOnEqualSchemas) {
    for (const auto& f : test::fixtures()) {
        EXPECT_EQ(fallback_transform(f.input, *f.source_schema, *f.source_schema), f.input) << f.slug;
    }
}

TEST(Fallback, EmptyInputIsZeroFilled) {
    const Schema src = test::schema(json::parse(R"({"type":"object","properties":{"y":{"type":"string"}}})"));
    const Schema tgt = test::schema(json::parse(R"({"type":"object","properties":{"x":{"type":"integer"}},"required":["x"]})"));
    EXPECT_EQ(fallback_transform(json::object(), src, tgt), json::parse(R"({"x":0})"));
}

TEST(Fallback, ZeroValuesPerKind) {
    const Schema s = test::schema(json::parse(R"({"type":"object","properties":{
        "s":{"type":"string"},"n":{"type":"number"},"b":{"type":"boolean"},"a":{"type":"array","items":{"type":"string"}},
        "e":{"type":"string","enum":["low","high"]},
        "o":{"type":"object","properties":{"k":{"type":"integer"},"opt":{"type":"string"}},"required":["k"]}},
        "required":["s","n","b","a","e","o"]})"));
    const json z = zero_value(s.root());
    EXPECT_EQ(z, json::parse(R"({"s":"","n":0.0,"b":false,"a":[],"e":"low","o":{"k":0}})"));
    EXPECT_TRUE(z["n"].is_number_float());
    EXPECT_TRUE(validate_instance(z, s).empty());
}

TEST(Fallback, CoercesScalarsToTargetKind) {
    const SchemaNode integer{Kind::Integer};
    const SchemaNode number{Kind::Number};
    const SchemaNode text{Kind::String};
    EXPECT_EQ(coerce_value("21", integer), 21);
    EXPECT_EQ(coerce_value("2.5", number), 2.5);
    EXPECT_EQ(coerce_value(7, text), "7");
    EXPECT_EQ(coerce_value("2026-06-23T14:30:00Z", integer), 1782225000);
    EXPECT_TRUE(coerce_value("hello", integer).is_null());
}

TEST(Fallback, UnitComesFromHintDescriptionOrName) {
    SchemaNode hinted{Kind::Number};
    hinted.unit_hint = "°F";
    EXPECT_EQ(leaf_unit(Path::parse("value"), hinted), "fahrenheit");
    SchemaNode described{Kind::Number};
    described.description = "speed in km/h";
    EXPECT_EQ(leaf_unit(Path::parse("value"), described), "kmh");
    EXPECT_EQ(leaf_unit(Path::parse("altitude_m"), SchemaNode{Kind::Number}), "m");
    EXPECT_EQ(leaf_unit(Path::parse("altitude"), SchemaNode{Kind::Number}), std::nullopt);
}

TEST(Fallback, NeverThrowsAndAlwaysConforms) {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 400; ++trial) {
        const Schema src = test::schema(test::random_schema_doc(rng));
        const Schema tgt = test::schema(test::random_schema_doc(rng));
        const json data = test::random_instance(rng, src.root());
        json out;
        ASSERT_NO_THROW(out = fallback_transform(data, src, tgt)) << src.canonical_text() << " -> " << tgt.canonical_text();
        ASSERT_TRUE(out.is_object());
        const auto v = validate_instance(out, tgt);
        EXPECT_TRUE(v.empty()) << src.canonical_text() << " -> " << tgt.canonical_text() << " on " << data.dump()
                               << " gave " << out.dump() << " (" << (v.empty() ? "" : v[0].path.str() + ": " + v[0].reason) << ")";
    }
}

TEST(Fallback, GarbageInputStillConforms) {
    const auto& f = test::fixture(10);
    for (const json& data : {json(nullptr), json::array({1, 2}), json("text"), json::parse(R"({"speed_kmh":"fast"})")}) {
        const json out = fallback_transform(data, *f.source_schema, *f.target_schema);
        EXPECT_TRUE(validate_instance(out, *f.target_schema).empty()) << data.dump() << " gave " << out.dump();
    }
}

namespace {

std::string camel(const std::string& snake) {
    std::string out;
    bool up = false;
    for (char c : snake) {
        if (c == '_') {
            up = true;
        } else {
            out += up ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
            up = false;
        }
    }
    return out;
}

} // namespace

// Schemas that differ only in field-name spelling are bridged exactly.
TEST(Fallback, RenameOnlyPairsAreLossless) {
    const std::vector<std::string> pool{"order_id", "customer_name", "total_amount", "is_paid", "item_count",
                                        "ship_city", "note_text", "created_by", "priority_level", "region_code"};
    const std::vector<std::string> kinds{"string", "number", "integer", "boolean"};
    std::mt19937 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        json sp = json::object(), tp = json::object(), req = json::array(), treq = json::array();
        for (const auto& name : pool) {
            if (rng() % 2) continue;
            const json node = {{"type", kinds[rng() % kinds.size()]}};
            sp[name] = node;
            tp[camel(name)] = node;
            if (rng() % 2) {
                req.push_back(name);
                treq.push_back(camel(name));
            }
        }
        if (sp.empty()) continue;
        const Schema src = test::schema({{"type", "object"}, {"properties", sp}, {"required", req}});
        const Schema tgt = test::schema({{"type", "object"}, {"properties", tp}, {"required", treq}});
        const json data = test::random_instance(rng, src.root());
        const json out = fallback_transform(data, src, tgt);
        EXPECT_TRUE(validate_instance(out, tgt).empty()) << out.dump();
        for (const auto& [k, v] : data.items()) EXPECT_EQ(out[camel(k)], v) << k;
    }
}
