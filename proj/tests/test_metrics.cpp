#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "camcp/errors.hpp"
#include "camcp/metrics.hpp"
#include "camcp/protocol.hpp"
#include "camcp/runtime.hpp"
#include "camcp/value.hpp"
#include "oracles.hpp"

using namespace camcp;

namespace {

Scenario load(const std::string& name)
{
    return load_scenario(std::string(CAMCP_SCENARIO_DIR) + "/" + name + ".scenario");
}

}  // namespace

TEST(PairedStats, SmallKnownCase)
{
    const std::vector<double> d{1, 2, 3};
    const PairedStats s = paired_stats(d);
    EXPECT_EQ(s.n, 3u);
    EXPECT_DOUBLE_EQ(s.mean_diff, 2.0);
    EXPECT_DOUBLE_EQ(s.sd, 1.0);
    ASSERT_TRUE(s.t_stat);
    EXPECT_NEAR(*s.t_stat, 3.4641, 1e-4);
}

TEST(PairedStats, ZeroVarianceLeavesTUndefined)
{
    const std::vector<double> d{3, 3, 3, 3};
    const PairedStats s = paired_stats(d);
    EXPECT_DOUBLE_EQ(s.mean_diff, 3.0);
    EXPECT_DOUBLE_EQ(s.sd, 0.0);
    EXPECT_FALSE(s.t_stat);
    EXPECT_TRUE(s.to_value()["t_stat"].is_null());
}

TEST(PairedStats, TooFewDiffs)
{
    EXPECT_THROW(paired_stats(std::vector<double>{}), InsufficientData);
    EXPECT_THROW(paired_stats(std::vector<double>{1.5}), InsufficientData);
}

TEST(PairedStats, MatchesPairwiseOracle)
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.5, 2.0);
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> d(2 + rng() % 30);
        for (auto& x : d)
            x = noise(rng);
        const PairedStats s = paired_stats(d);
        long double sum = 0;
        for (double x : d)
            sum += x;
        const double mean = static_cast<double>(sum / d.size());
        const double sd = std::sqrt(oracle::pairwise_variance(d));
        ASSERT_NEAR(s.mean_diff, mean, 1e-12);
        ASSERT_NEAR(s.sd, sd, 1e-9 * std::max(1.0, sd));
        ASSERT_NEAR(*s.t_stat, mean / (sd / std::sqrt(static_cast<double>(d.size()))),
                    1e-8 * std::max(1.0, std::abs(*s.t_stat)));
    }
}

TEST(PairedStats, LongListMatchesPairwiseOracle)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(-3.0, 7.5);
    std::vector<double> d(10000);
    for (auto& x : d)
        x = noise(rng);
    const PairedStats s = paired_stats(d);
    long double sum = 0;
    for (double x : d)
        sum += x;
    const double mean = static_cast<double>(sum / d.size());
    const double sd = std::sqrt(oracle::pairwise_variance(d));
    EXPECT_NEAR(s.mean_diff, mean, 1e-9 * std::abs(mean));
    EXPECT_NEAR(s.sd, sd, 1e-9 * sd);
    EXPECT_NEAR(*s.t_stat, mean / (sd / 100.0), 1e-9 * std::abs(*s.t_stat));
}

TEST(Metrics, TravelHeadlineNumbers)
{
    const Scenario travel = load("travel");
    const RunMetrics ca = compute_metrics(run_context_aware(travel, 0), travel);
    const RunMetrics trad = compute_metrics(run_traditional(travel, 0), travel);
    EXPECT_EQ(ca.llm_calls, 2);
    EXPECT_EQ(trad.llm_calls, 5);
    EXPECT_DOUBLE_EQ(ca.completeness, 1.0);
    EXPECT_DOUBLE_EQ(ca.simulated_latency_s, 13.6);
    EXPECT_DOUBLE_EQ(trad.simulated_latency_s, 31.6);
    EXPECT_DOUBLE_EQ(ca.goal_satisfaction, 1.0);
    EXPECT_DOUBLE_EQ(ca.constraint_satisfaction, 1.0);
    EXPECT_FALSE(ca.makespan_min);
    EXPECT_EQ(ca.mode, RunMode::context_aware);
}

TEST(Metrics, WeddingHeadlineNumbers)
{
    const Scenario wedding = load("wedding_p5");
    const RunMetrics ca = compute_metrics(run_context_aware(wedding, 0), wedding);
    const RunMetrics trad = compute_metrics(run_traditional(wedding, 0), wedding);
    EXPECT_EQ(ca.makespan_min, 180);
    EXPECT_EQ(trad.makespan_min, 330);
    EXPECT_EQ(ca.coordination, 1);
    EXPECT_EQ(trad.coordination, 0);
    EXPECT_EQ(ca.llm_calls, 1);
    EXPECT_EQ(trad.llm_calls, 2);
    for (const RunMetrics& m : {ca, trad}) {
        EXPECT_DOUBLE_EQ(m.goal_satisfaction, 1.0);
        EXPECT_DOUBLE_EQ(m.constraint_satisfaction, 1.0);
    }
}

TEST(Metrics, ReplayFromFileReproducesMetrics)
{
    const Scenario travel = load("travel");
    const Trace t = run_traditional(travel, 17);
    const std::string path = testing::TempDir() + "replay_trace.jsonl";
    {
        std::ofstream out(path);
        t.write(out);
    }
    EXPECT_EQ(replay(path), compute_metrics(t));
    EXPECT_EQ(Trace::parse(t.serialize()).serialize(), t.serialize());
    EXPECT_THROW(replay(testing::TempDir() + "no_such_trace.jsonl"), MalformedTrace);
}

TEST(Metrics, GoldenTracesReplayToCommittedMetrics)
{
    for (const std::string name : {"travel_ca_seed0", "wedding_p5_ca_seed0"}) {
        const std::string base = std::string(CAMCP_GOLDEN_DIR) + "/" + name;
        std::ifstream in(base + ".metrics.json");
        ASSERT_TRUE(in) << name;
        const std::string expected((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        EXPECT_EQ(replay(base + ".jsonl").to_value(), parse_value(expected)) << name;
    }
}

TEST(Metrics, MessageCodecRoundTripPreservesMetrics)
{
    for (const std::string name : {"travel", "wedding_p5"}) {
        const Trace t = run_traditional(load(name), 5);
        Trace recoded = t;
        int messages = 0;
        for (auto& e : recoded.events) {
            if (e.kind != EventKind::message)
                continue;
            e.payload["wire"] = encode(decode(e.payload.at("wire").get<std::string>()));
            ++messages;
        }
        EXPECT_GT(messages, 0) << name;
        EXPECT_EQ(recoded.serialize(), t.serialize()) << name;
        EXPECT_EQ(compute_metrics(Trace::parse(recoded.serialize())), compute_metrics(t)) << name;
    }
}

TEST(Metrics, MalformedTracesAreRejected)
{
    const Trace t = run_context_aware(load("travel"), 0);
    const std::string text = t.serialize();

    const std::string truncated = text.substr(0, text.rfind("{\"t\""));
    try {
        Trace::parse(truncated);
        FAIL();
    } catch (const MalformedTrace& e) {
        EXPECT_EQ(e.line(), t.events.size() - 1);
    }

    try {
        Trace::parse(text.substr(0, 20) + "\n" + text);
        FAIL();
    } catch (const MalformedTrace& e) {
        EXPECT_EQ(e.line(), 1u);
    }

    Trace tampered = t;
    tampered.events.erase(std::find_if(tampered.events.begin(), tampered.events.end(),
                                       [](const TraceEvent& e) { return e.kind == EventKind::llm_call; }));
    EXPECT_THROW(compute_metrics(tampered), MalformedTrace);

    Trace reordered = t;
    std::swap(reordered.events[1].logical_time, reordered.events[2].logical_time);
    EXPECT_THROW(compute_metrics(reordered), MalformedTrace);

    EXPECT_THROW(compute_metrics(t, load("wedding_p5")), MalformedTrace);
}
