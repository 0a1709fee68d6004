#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "camcp/errors.hpp"
#include "camcp/metrics.hpp"
#include "camcp/runtime.hpp"

using namespace camcp;

namespace {

Scenario load(const std::string& name)
{
    return load_scenario(std::string(CAMCP_SCENARIO_DIR) + "/" + name + ".scenario");
}

std::vector<std::string> roles(const Trace& t)
{
    std::vector<std::string> out;
    for (const auto& e : t.events)
        if (e.kind == EventKind::llm_call)
            out.push_back(e.payload["role"].get<std::string>());
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Runtime, ContextAwareTravelCallsThePlannerTwice)
{
    const Scenario travel = load("travel");
    const Trace t = run_context_aware(travel, 0);
    EXPECT_EQ(roles(t), (std::vector<std::string>{"plan", "summarize"}));
    EXPECT_EQ(t.count(EventKind::tool_exec), 4u);
    EXPECT_EQ(t.count(EventKind::stage_done), 4u);
    EXPECT_EQ(t.count(EventKind::stage_failed), 0u);
    EXPECT_DOUBLE_EQ(t.simulated_latency_s, 13.6);
    EXPECT_EQ(t.events.back().payload["status"], "complete");

    // No planner call while reactors run.
    std::size_t first = 0, second = 0;
    for (std::size_t i = 0; i < t.events.size(); ++i)
        if (t.events[i].kind == EventKind::llm_call)
            (first == 0 ? first : second) = i;
    for (std::size_t i = first + 1; i < second; ++i)
        EXPECT_NE(t.events[i].kind, EventKind::llm_call);
    EXPECT_LT(first, second);
}

TEST(Runtime, ContextAwareMessagesFollowTheFlow)
{
    const Trace t = run_context_aware(load("travel"), 0);
    const auto msgs = t.protocol_messages();
    EXPECT_NO_THROW(validate_sequence(msgs));
    EXPECT_EQ(msgs.front().type(), MessageType::plan_request);
    EXPECT_EQ(msgs.back().type(), MessageType::final_response);
    const auto& text = std::get<FinalResponse>(msgs.back().message()).text;
    EXPECT_NE(text.find("Completed 4 of 4 stages."), std::string::npos);
    EXPECT_NE(text.find("- budget: 1500"), std::string::npos);
}

TEST(Runtime, StoreWritesAreTraced)
{
    const Trace t = run_context_aware(load("travel"), 0);
    std::vector<std::string> keys;
    for (const auto& e : t.events)
        if (e.kind == EventKind::scs_write)
            keys.push_back(e.payload["key"].get<std::string>());
    ASSERT_FALSE(keys.empty());
    EXPECT_EQ(keys.front(), "goals");
    EXPECT_EQ(keys.back(), "travel_complete");
    EXPECT_NE(std::find(keys.begin(), keys.end(), "goals_seeded"), keys.end());
    EXPECT_NE(std::find(keys.begin(), keys.end(), "dining_done"), keys.end());
}

TEST(Runtime, TraditionalTravelCallsPerStage)
{
    const Trace t = run_traditional(load("travel"), 0);
    EXPECT_EQ(roles(t), (std::vector<std::string>{"step_decision", "step_decision", "step_decision",
                                                   "step_decision", "summarize"}));
    EXPECT_DOUBLE_EQ(t.simulated_latency_s, 31.6);
    EXPECT_EQ(t.count(EventKind::stage_done), 4u);
    EXPECT_EQ(t.count(EventKind::scs_write), 0u);
    EXPECT_NO_THROW(validate_sequence(t.protocol_messages()));
}

TEST(Runtime, NarrowWindowLosesTheBudget)
{
    RunOptions opts;
    opts.window = WindowConfig{true, 3};
    const Trace t = run_traditional(load("travel"), 0, opts);
    EXPECT_EQ(t.count(EventKind::stage_done), 3u);
    ASSERT_EQ(t.count(EventKind::stage_failed), 1u);
    for (const auto& e : t.events)
        if (e.kind == EventKind::stage_failed) {
            EXPECT_EQ(e.payload["stage"], "dining");
            EXPECT_EQ(e.payload["reason"], "context window lost constraints.budget");
        }
    EXPECT_EQ(t.events.back().payload["status"], "incomplete_context");
    EXPECT_DOUBLE_EQ(compute_metrics(t).completeness, 0.75);
    // Decisions are still made for the failed stage.
    EXPECT_EQ(roles(t).size(), 5u);

    // A window holding every entry changes nothing.
    opts.window = WindowConfig{true, 5};
    EXPECT_DOUBLE_EQ(compute_metrics(run_traditional(load("travel"), 0, opts)).completeness, 1.0);
}

TEST(Runtime, WeddingCallPolicies)
{
    const Scenario wedding = load("wedding_p5");
    const Trace ca = run_context_aware(wedding, 0);
    EXPECT_EQ(roles(ca), std::vector<std::string>{"combined"});
    EXPECT_NO_THROW(validate_sequence(ca.protocol_messages()));
    const Trace trad = run_traditional(wedding, 0);
    EXPECT_EQ(roles(trad), (std::vector<std::string>{"plan", "summarize"}));
    // One dispatch per request.
    EXPECT_EQ(trad.count(EventKind::tool_exec), 2u + 11u);
    EXPECT_EQ(ca.count(EventKind::tool_exec), 3u);
}

TEST(Runtime, SuppliedPlannerIsUsedAndCounted)
{
    MockPlanner planner;
    run_context_aware(load("travel"), 0, planner);
    EXPECT_EQ(planner.call_count(), 2);
    const Trace second = run_traditional(load("travel"), 0, planner);
    EXPECT_EQ(planner.call_count(), 7);
    EXPECT_EQ(second.events.back().payload["llm_calls"], 5);
}

TEST(Runtime, IdenticalInputsGiveIdenticalTraces)
{
    const Scenario travel = load("travel");
    for (std::uint64_t seed : {0u, 3u, 41u})
        for (RunMode mode : {RunMode::traditional, RunMode::context_aware})
            EXPECT_EQ(run_mode(travel, mode, seed).serialize(), run_mode(travel, mode, seed).serialize());
}

TEST(Runtime, ParallelReactorsReachTheSameOutcome)
{
    RunOptions opts;
    opts.parallel_reactors = true;
    for (const char* name : {"travel", "wedding_p5"}) {
        const Scenario sc = load(name);
        EXPECT_EQ(compute_metrics(run_context_aware(sc, 0, opts)), compute_metrics(run_context_aware(sc, 0)));
    }
}

TEST(Runtime, FailedStageLeavesTheRunIncomplete)
{
    Value doc;
    {
        std::ifstream in(std::string(CAMCP_SCENARIO_DIR) + "/travel.scenario");
        doc = Value::parse(in);
    }
    // No vegan restaurant left in Seattle.
    for (auto& r : doc["data_tables"]["destinations"]["Seattle"]["restaurants"])
        r["tags"] = Value::array();
    const Scenario sc = parse_scenario(doc);
    const Trace t = run_context_aware(sc, 0);
    EXPECT_EQ(t.events.back().payload["status"], "incomplete_context");
    EXPECT_EQ(roles(t), std::vector<std::string>{"plan"});
    EXPECT_EQ(t.protocol_messages().back().type(), MessageType::context_write);
    const RunMetrics m = compute_metrics(t);
    EXPECT_DOUBLE_EQ(m.completeness, 0.75);
    EXPECT_DOUBLE_EQ(m.goal_satisfaction, 0.75);
}

TEST(Runtime, StepBudgetIsEnforced)
{
    RunOptions opts;
    opts.max_steps = 2;
    EXPECT_THROW(run_context_aware(load("travel"), 0, opts), BudgetExceeded);
}

TEST(Runtime, GoldenTracesAreStable)
{
    EXPECT_EQ(run_context_aware(load("travel"), 0).serialize(),
              read_file(CAMCP_GOLDEN_DIR "/travel_ca_seed0.jsonl"));
    EXPECT_EQ(run_context_aware(load("wedding_p5"), 0).serialize(),
              read_file(CAMCP_GOLDEN_DIR "/wedding_p5_ca_seed0.jsonl"));
}
