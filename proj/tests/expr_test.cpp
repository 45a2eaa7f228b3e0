#include "schemabridge/resolve/adapter.hpp"
#include "schemabridge/resolve/builtins.hpp"
#include "schemabridge/resolve/expr.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace schemabridge;

namespace {

json eval_text(std::string_view text, const json& data = json::object(), const char* self = nullptr) {
    const Path p = self ? Path::parse(self) : Path{};
    return evaluate(*parse_expr(text, self ? &p : nullptr), data);
}

json call(std::string_view fn, std::vector<json> args) { return call_builtin(fn, args); }

ExprPtr random_expr(std::mt19937& rng, int depth) {
    static const std::vector<std::string> paths{"a", "b.c", "items[].v", "tags[]"};
    static const std::vector<std::string> fns{"to_float", "round", "min", "concat", "first", "kmh_to_mph", "lower"};
    const int pick = std::uniform_int_distribution<int>(0, depth > 3 ? 1 : 3)(rng);
    switch (pick) {
    case 0: return make_get(Path::parse(paths[rng() % paths.size()]));
    case 1: {
        switch (rng() % 5) {
        case 0: return make_const(static_cast<std::int64_t>(rng() % 1000));
        case 1: return make_const(static_cast<double>(rng() % 10000) / 8.0);
        case 2: return make_const("s\"q" + std::to_string(rng() % 10));
        case 3: return make_const(rng() % 2 == 0);
        default: return make_const(nullptr);
        }
    }
    case 2: {
        static const std::vector<expr::Op> ops{expr::Op::Add, expr::Op::Sub, expr::Op::Mul, expr::Op::Div};
        return make_arith(ops[rng() % ops.size()], random_expr(rng, depth + 1), random_expr(rng, depth + 1));
    }
    default: {
        const auto& fn = fns[rng() % fns.size()];
        std::vector<ExprPtr> args{random_expr(rng, depth + 1)};
        if (fn == "round") args.push_back(make_const(static_cast<std::int64_t>(rng() % 4)));
        if (fn == "min" || fn == "concat") {
            for (unsigned k = rng() % 3; k > 0; --k) args.push_back(random_expr(rng, depth + 1));
        }
        return make_call(fn, std::move(args));
    }
    }
}

} // namespace

TEST(ExprParse, PrecedenceAndParentheses) {
    EXPECT_EQ(eval_text("1 + 2 * 3"), 7);
    EXPECT_EQ(eval_text("(1 + 2) * 3"), 9);
    EXPECT_EQ(eval_text("10 - 4 - 3"), 3);
    EXPECT_DOUBLE_EQ(eval_text("9 / 2").get<double>(), 4.5);
    EXPECT_EQ(eval_text("-3 + 5"), 2);
    EXPECT_EQ(eval_text("-(2 * 3)"), -6);
}

TEST(ExprParse, LiteralsAndPaths) {
    EXPECT_EQ(eval_text(R"("EUR")"), "EUR");
    EXPECT_EQ(eval_text(R"("a\"b")"), "a\"b");
    EXPECT_EQ(eval_text("true"), true);
    EXPECT_TRUE(eval_text("null").is_null());
    EXPECT_DOUBLE_EQ(eval_text("1.5e2").get<double>(), 150.0);
    const json data = {{"a", {{"b", 4}}}, {"xs", {{{"v", 1}}, {{"v", 2}}}}};
    EXPECT_EQ(eval_text("$a.b * 2", data), 8);
    EXPECT_EQ(eval_text("$xs[].v", data), json::array({1, 2}));
    EXPECT_EQ(eval_text("$ + 1", data, "a.b"), 5);
    EXPECT_EQ(eval_text("", data, "a.b"), 4);
    EXPECT_TRUE(eval_text("$missing", data).is_null());
}

TEST(ExprParse, WalkthroughTransforms) {
    const json in = {{"temperature_celsius", 18.5}, {"wind_speed_kmh", 15.3}, {"timestamp", "2026-06-23T14:30:00Z"}};
    EXPECT_EQ(eval_text("celsius_to_fahrenheit($)", in, "temperature_celsius").get<double>(), 65.3);
    EXPECT_NEAR(eval_text("kmh_to_mph($)", in, "wind_speed_kmh").get<double>(), 9.5069763, 1e-9);
    EXPECT_EQ(eval_text("round(kmh_to_mph($wind_speed_kmh), 2)", in).get<double>(), 9.51);
    EXPECT_EQ(eval_text("iso8601_to_epoch($)", in, "timestamp"), 1782225000);
    // The hand-written walkthrough formula gives the same value.
    EXPECT_EQ(eval_text("$temperature_celsius * 9 / 5 + 32", in).get<double>(), 65.3);
}

TEST(ExprParse, SyntaxErrors) {
    EXPECT_THROW((void)parse_expr("1 +"), ExprSyntaxError);
    EXPECT_THROW((void)parse_expr("(1"), ExprSyntaxError);
    EXPECT_THROW((void)parse_expr("foo"), ExprSyntaxError);
    EXPECT_THROW((void)parse_expr("$"), ExprSyntaxError);
    EXPECT_THROW((void)parse_expr(""), ExprSyntaxError);
    EXPECT_THROW((void)parse_expr("\"open"), ExprSyntaxError);
    EXPECT_THROW((void)parse_expr("1 2"), ExprSyntaxError);
    EXPECT_THROW((void)parse_expr("$a..b"), ExprSyntaxError);
    EXPECT_THROW((void)parse_expr("'single'"), ExprSyntaxError);
}

TEST(ExprParse, SizeLimits) {
    std::string deep;
    for (std::size_t i = 0; i < kMaxExprDepth + 5; ++i) deep += "(";
    deep += "1";
    for (std::size_t i = 0; i < kMaxExprDepth + 5; ++i) deep += ")";
    EXPECT_THROW((void)parse_expr(deep), ExprSyntaxError);
    std::string wide = "1";
    for (std::size_t i = 0; i < kMaxExprNodes; ++i) wide += " + 1";
    EXPECT_THROW((void)parse_expr(wide), ExprSyntaxError);
}

TEST(ExprTree, JsonFormRoundTrips) {
    std::mt19937 rng(21);
    for (int i = 0; i < 500; ++i) {
        const auto e = random_expr(rng, 0);
        const json j = to_json(*e);
        EXPECT_EQ(to_json(*expr_from_json(j)), j);
        // Rendered text parses back to the same tree.
        EXPECT_EQ(to_json(*parse_expr(render(*e))), j) << render(*e);
    }
}

TEST(ExprTree, MalformedTreesRejected) {
    EXPECT_THROW((void)expr_from_json(json::parse(R"({"kind":"loop"})")), ExprSyntaxError);
    EXPECT_THROW((void)expr_from_json(json::parse(R"({"kind":"get"})")), ExprSyntaxError);
    EXPECT_THROW((void)expr_from_json(json::parse(R"({"kind":"const","value":[1]})")), ExprSyntaxError);
    EXPECT_THROW((void)expr_from_json(json::parse(R"({"kind":"arith","op":"%","lhs":{"kind":"const","value":1},"rhs":{"kind":"const","value":1}})")),
                 ExprSyntaxError);
    EXPECT_THROW((void)expr_from_json(json::parse(R"({"kind":"call","fn":"round","args":{}})")), ExprSyntaxError);
    EXPECT_THROW((void)expr_from_json(json::parse("42")), ExprSyntaxError);
}

TEST(ExprTree, CountsAndPaths) {
    const auto e = parse_expr("round(kmh_to_mph($a) + $b.c, 2)");
    EXPECT_EQ(node_count(*e), 6u);
    EXPECT_EQ(depth(*e), 4u);
    std::vector<Path> paths;
    collect_paths(*e, paths);
    EXPECT_EQ(paths, (std::vector<Path>{Path::parse("a"), Path::parse("b.c")}));
}

TEST(Arith, IntegersStayIntegralAndErrorsAreReported) {
    EXPECT_TRUE(eval_text("2 + 3").is_number_integer());
    EXPECT_TRUE(eval_text("2.0 + 3").is_number_float());
    EXPECT_TRUE(eval_text("null + 3").is_null());
    EXPECT_THROW((void)eval_text("1 / 0"), EvalError);
    EXPECT_THROW((void)eval_text("\"a\" + 1"), EvalError);
    EXPECT_THROW((void)eval_text("9223372036854775807 + 1"), EvalError);
}

TEST(Builtins, WhitelistAndArity) {
    const std::set<std::string> expected{"to_float",         "to_int",         "to_string",  "round",
                                         "celsius_to_fahrenheit", "fahrenheit_to_celsius", "kmh_to_mph",
                                         "mph_to_kmh",       "m_to_ft",        "ft_to_m",    "iso8601_to_epoch",
                                         "epoch_to_iso8601", "first",          "wrap_array", "mean",
                                         "min",              "max",            "lower",      "upper",
                                         "concat"};
    std::set<std::string> actual;
    for (const auto& b : builtins()) actual.emplace(b.name);
    EXPECT_EQ(actual, expected);
    EXPECT_EQ(find_builtin("round")->min_args, 2u);
    EXPECT_EQ(find_builtin("round")->max_args, 2u);
    EXPECT_EQ(find_builtin("eval"), nullptr);
    EXPECT_THROW((void)call("system", {json("ls")}), EvalError);
    EXPECT_THROW((void)call("round", {json(1.0)}), EvalError);
    EXPECT_THROW((void)call("lower", {json("a"), json("b")}), EvalError);
}

TEST(Builtins, Conversions) {
    EXPECT_EQ(call("to_int", {json("21")}), 21);
    EXPECT_EQ(call("to_int", {json(21.9)}), 21);
    EXPECT_EQ(call("to_int", {json(true)}), 1);
    EXPECT_THROW((void)call("to_int", {json("x")}), EvalError);
    EXPECT_TRUE(call("to_float", {json(72)}).is_number_float());
    EXPECT_EQ(call("to_float", {json(72)}).get<double>(), 72.0);
    EXPECT_EQ(call("to_float", {json("2.5")}).get<double>(), 2.5);
    EXPECT_EQ(call("to_string", {json(42)}), "42");
    EXPECT_EQ(call("to_string", {json("s")}), "s");
    EXPECT_THROW((void)call("to_string", {json::array()}), EvalError);
    EXPECT_EQ(call("round", {json(2.675), json(1)}).get<double>(), 2.7);
    EXPECT_EQ(call("round", {json(41.0105), json(2)}).get<double>(), 41.01);
    EXPECT_THROW((void)call("round", {json(1.0), json(-1)}), EvalError);
    EXPECT_EQ(call("lower", {json("WARN")}), "warn");
    EXPECT_EQ(call("upper", {json("asml")}), "ASML");
    EXPECT_EQ(call("concat", {json("a"), json(1), json(nullptr), json("b")}), "a1b");
}

TEST(Builtins, UnitFunctionsHitHandCalculations) {
    EXPECT_EQ(celsius_to_fahrenheit(18.5), 65.3);
    EXPECT_EQ(celsius_to_fahrenheit(21.0), 69.8);
    EXPECT_EQ(celsius_to_fahrenheit(0.0), 32.0);
    EXPECT_EQ(celsius_to_fahrenheit(-40.0), -40.0);
    EXPECT_NEAR(kmh_to_mph(88.0), 54.680648, 1e-9);
    EXPECT_NEAR(m_to_ft(12.5), 41.0105, 1e-9);
    EXPECT_NEAR(kmh_to_mph(15.3), 9.50698, 1e-5);
}

TEST(Builtins, Aggregates) {
    const json temps = {20.5, 21.5, 22.5};
    EXPECT_EQ(call("mean", {temps}).get<double>(), 21.5);
    EXPECT_EQ(call("min", {temps}).get<double>(), 20.5);
    EXPECT_EQ(call("max", {temps}).get<double>(), 22.5);
    EXPECT_EQ(call("min", {json(3), json(1), json(2)}), 1);
    EXPECT_TRUE(call("max", {json::array({1, 5})}).is_number_integer());
    EXPECT_THROW((void)call("mean", {json::array()}), EvalError);
    EXPECT_EQ(call("first", {json::array({"outdoor", "waterproof"})}), "outdoor");
    EXPECT_TRUE(call("first", {json::array()}).is_null());
    EXPECT_EQ(call("first", {json(7)}), 7);
    EXPECT_EQ(call("wrap_array", {json(9.99)}), json::array({9.99}));
    EXPECT_EQ(call("wrap_array", {json(nullptr)}), json::array({nullptr}));
}

TEST(Builtins, NullPropagates) {
    EXPECT_TRUE(call("to_int", {json(nullptr)}).is_null());
    EXPECT_TRUE(call("kmh_to_mph", {json(nullptr)}).is_null());
    EXPECT_TRUE(call("round", {json(nullptr), json(2)}).is_null());
}

TEST(Iso8601, PinnedEpochs) {
    EXPECT_EQ(iso8601_to_epoch("2026-06-23T14:30:00Z"), 1782225000);
    EXPECT_EQ(iso8601_to_epoch("2026-01-15T08:45:30Z"), 1768466730);
    EXPECT_EQ(iso8601_to_epoch("2026-03-01T12:00:00+02:00"), 1772359200);
    EXPECT_EQ(iso8601_to_epoch("2026-05-04T06:07:08Z"), 1777874828);
    EXPECT_EQ(iso8601_to_epoch("1970-01-01T00:00:00Z"), 0);
    EXPECT_EQ(iso8601_to_epoch("2026-06-23 14:30:00"), 1782225000);
    EXPECT_EQ(iso8601_to_epoch("2026-06-23T14:30:00.750Z"), 1782225000);
    EXPECT_EQ(iso8601_to_epoch("2026-06-23T16:30:00+0200"), 1782225000);
    EXPECT_EQ(iso8601_to_epoch("1969-12-31T23:59:59Z"), -1);
}

TEST(Iso8601, MalformedTextIsAnError) {
    EXPECT_THROW((void)iso8601_to_epoch("not-a-date"), EvalError);
    EXPECT_THROW((void)iso8601_to_epoch("2026-13-01T00:00:00Z"), EvalError);
    EXPECT_THROW((void)iso8601_to_epoch("2026-02-30T00:00:00Z"), EvalError);
    EXPECT_THROW((void)iso8601_to_epoch("2026-06-23T25:00:00Z"), EvalError);
    EXPECT_THROW((void)iso8601_to_epoch("2026-06-23T14:30:00Q"), EvalError);
    EXPECT_FALSE(parse_iso8601("2026-06-23").has_value());
    EXPECT_THROW((void)eval_text("iso8601_to_epoch(\"not-a-date\")"), EvalError);
}

TEST(Iso8601, EpochRoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::int64_t> dist(-2'000'000'000, 4'000'000'000);
    for (int i = 0; i < 2000; ++i) {
        const auto t = dist(rng);
        EXPECT_EQ(iso8601_to_epoch(epoch_to_iso8601(t)), t);
    }
    EXPECT_EQ(epoch_to_iso8601(1782225000), "2026-06-23T14:30:00Z");
}
