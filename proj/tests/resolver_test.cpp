#include "schemabridge/eval/metrics.hpp"
#include "schemabridge/resolve/resolver.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace schemabridge;

namespace {

MismatchReport structural(const ScenarioFixture& f) { return detect_structural(*f.source_schema, *f.target_schema); }

} // namespace

TEST(Resolve, CodegenColdThenWarm) {
    test::MockStack stack(Strategy::Codegen);
    LlmSession session(*stack.client);
    const auto& f = test::fixture(1);
    const auto cold = resolve(stack.route(1), f.input, structural(f), session, *stack.cache);
    EXPECT_EQ(cold.llm_calls, 2);
    EXPECT_FALSE(cold.cache_hit);
    EXPECT_TRUE(compare_outputs(cold.output, f.golden).pass);

    LlmSession warm_session(*stack.client);
    const auto warm = resolve(stack.route(1), f.input, structural(f), warm_session, *stack.cache);
    EXPECT_EQ(warm.llm_calls, 0);
    EXPECT_TRUE(warm.cache_hit);
    EXPECT_EQ(warm.output, cold.output);
}

TEST(Resolve, DirectCallsTheModelPerRequest) {
    test::MockStack stack(Strategy::Direct);
    const auto& f = test::fixture(1);
    LlmSession s1(*stack.client);
    const auto cold = resolve(stack.route(1), f.input, structural(f), s1, *stack.cache);
    EXPECT_EQ(cold.llm_calls, 2);
    EXPECT_EQ(cold.strategy, Strategy::Direct);
    LlmSession s2(*stack.client);
    const auto warm = resolve(stack.route(1), f.input, structural(f), s2, *stack.cache);
    EXPECT_EQ(warm.llm_calls, 1);
    EXPECT_TRUE(warm.cache_hit);
    EXPECT_TRUE(compare_outputs(warm.output, f.golden).pass);
    EXPECT_EQ(stack.mock->calls(ContractKind::AdapterProgram), 0);
}

TEST(Resolve, PipelineWarmCallCounts) {
    for (const Strategy s : {Strategy::Codegen, Strategy::Direct}) {
        test::MockStack stack(s);
        for (const auto& f : test::fixtures()) {
            const auto first = stack.pipeline->process(stack.route(f.id), f.input);
            EXPECT_TRUE(compare_outputs(first.output, f.golden).pass) << f.slug;
            EXPECT_EQ(first.record.llm_calls, 3) << f.slug;
            const auto second = stack.pipeline->process(stack.route(f.id), f.input);
            EXPECT_EQ(second.record.llm_calls, s == Strategy::Codegen ? 0 : 1) << f.slug;
            EXPECT_TRUE(second.record.cache_hit);
            EXPECT_EQ(second.output, first.output);
        }
    }
}

TEST(Resolve, EveryFixtureResolvesToGoldenUnderBothStrategies) {
    for (const Strategy s : {Strategy::Codegen, Strategy::Direct}) {
        test::MockStack stack(s, false);
        for (const auto& f : test::fixtures()) {
            const auto r = stack.pipeline->process(stack.route(f.id), f.input);
            ASSERT_TRUE(r.resolution.has_value()) << f.slug << ": " << r.resolution_error;
            EXPECT_TRUE(compare_outputs(r.output, f.golden).pass) << to_string(s) << " " << f.slug << ": " << r.output.dump();
        }
    }
}

TEST(Resolve, FailuresNameTheirStage) {
    test::MockStack stack(Strategy::Codegen, true, MockMode::outage());
    LlmSession session(*stack.client);
    const auto& f = test::fixture(1);
    try {
        (void)resolve(stack.route(1), f.input, structural(f), session, *stack.cache);
        FAIL();
    } catch (const ResolutionFailure& e) {
        EXPECT_EQ(e.stage(), "mapping");
        ASSERT_TRUE(e.cause());
        EXPECT_THROW(std::rethrow_exception(e.cause()), Timeout);
    }
    // Nothing failed is cached.
    EXPECT_EQ(stack.cache->mappings.find(stack.route(1).schema_pair()), nullptr);

    try {
        (void)resolve(stack.route(1), json::array(), structural(f), session, *stack.cache);
        FAIL();
    } catch (const ResolutionFailure& e) {
        EXPECT_EQ(e.stage(), "input");
    }
}

TEST(Resolve, AdapterFailureAfterMappingKeepsTheMapping) {
    test::MockStack stack(Strategy::Codegen);
    const auto& f = test::fixture(1);
    json bad = f.input;
    bad["timestamp"] = "not a date";
    LlmSession session(*stack.client);
    try {
        (void)resolve(stack.route(1), bad, structural(f), session, *stack.cache);
        FAIL();
    } catch (const ResolutionFailure& e) {
        EXPECT_EQ(e.stage(), "adapter validation");
    }
    EXPECT_NE(stack.cache->mappings.find(stack.route(1).schema_pair()), nullptr);
    EXPECT_EQ(stack.cache->adapters.find(stack.route(1).schema_pair()), nullptr);
}

TEST(Resolve, GenerateMappingRejectsAForeignReport) {
    test::MockStack stack(Strategy::Codegen);
    LlmSession session(*stack.client);
    const auto& a = test::fixture(1);
    const auto& b = test::fixture(2);
    EXPECT_THROW((void)generate_mapping(session, *a.source_schema, *a.target_schema, structural(b)), PairMismatch);
}

TEST(Resolve, RunStrategyFromAGivenMapping) {
    test::MockStack stack(Strategy::Codegen);
    LlmSession session(*stack.client);
    const auto& f = test::fixture(3);
    const auto mapping = generate_mapping(session, *f.source_schema, *f.target_schema, structural(f));
    const auto run = run_strategy(stack.route(3), mapping, f.input, session);
    ASSERT_NE(run.adapter, nullptr);
    EXPECT_EQ(run.output, f.golden);

    auto direct_route = stack.route(3);
    direct_route.strategy = Strategy::Direct;
    const auto direct = run_strategy(direct_route, mapping, f.input, session);
    EXPECT_EQ(direct.adapter, nullptr);
    EXPECT_EQ(direct.output, f.golden);
}
