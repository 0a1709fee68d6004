#include <gtest/gtest.h>

#include <fstream>
#include <random>

#include "camcp/checks.hpp"
#include "camcp/errors.hpp"
#include "camcp/scenario.hpp"
#include "camcp/schedule.hpp"
#include "camcp/servers.hpp"
#include "oracles.hpp"

using namespace camcp;

namespace {

Scenario load(const std::string& name)
{
    return load_scenario(std::string(CAMCP_SCENARIO_DIR) + "/" + name + ".scenario");
}

Value scenario_doc(const std::string& name)
{
    std::ifstream in(std::string(CAMCP_SCENARIO_DIR) + "/" + name + ".scenario");
    return Value::parse(in);
}

std::string validation_field(const Value& doc)
{
    try {
        parse_scenario(doc);
    } catch (const ScenarioValidationError& e) {
        return e.field();
    }
    return "<valid>";
}

std::vector<TransportRequest> ready_at_zero(std::size_t n)
{
    std::vector<TransportRequest> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back({"r" + std::to_string(i), "o", "d", 0, RequestSource::arrival});
    return out;
}

StageInputs inputs_for(const StageTemplate& stage, const std::map<std::string, Value>& known)
{
    Snapshot snap;
    for (const auto& [k, v] : known)
        snap.entries.emplace(k, ContextEntry{k, v, 1, "t", 1});
    auto g = gather_inputs(stage, snap);
    return std::get<StageInputs>(g);
}

}  // namespace

TEST(Scenario, ShippedFilesLoad)
{
    const Scenario travel = load("travel");
    EXPECT_EQ(travel.kind, QueryKind::travel);
    EXPECT_EQ(travel.stages().size(), 4u);
    EXPECT_EQ(travel.call_policy.traditional_calls, TraditionalCalls::per_stage_plus_synthesis);
    EXPECT_EQ(travel.call_policy.ca_calls, ContextAwareCalls::plan_and_summarize);
    EXPECT_FALSE(travel.window.enabled);
    EXPECT_EQ(travel.window.budget_entries, 3);

    const Scenario wedding = load("wedding_p5");
    EXPECT_EQ(wedding.kind, QueryKind::wedding);
    EXPECT_EQ(wedding.call_policy.ca_calls, ContextAwareCalls::combined_single);
    EXPECT_EQ(wedding.data_tables["guests"].size() + wedding.data_tables["errands"].size(), 11u);
}

TEST(Scenario, MissingOrBrokenFilesAreParseErrors)
{
    EXPECT_THROW(load_scenario("/nonexistent/x.scenario"), ScenarioParseError);
    const std::string path = testing::TempDir() + "broken.scenario";
    std::ofstream(path) << "{\"name\": ";
    EXPECT_THROW(load_scenario(path), ScenarioParseError);
}

TEST(Scenario, ValidationNamesTheField)
{
    Value doc = scenario_doc("wedding_p5");
    doc["constraints"]["vehicle_capacity"] = 0;
    EXPECT_EQ(validation_field(doc), "constraints.vehicle_capacity");

    doc = scenario_doc("wedding_p5");
    doc["data_tables"]["errands"][2]["id"] = "g1";
    EXPECT_EQ(validation_field(doc), "data_tables.errands[2].id");

    doc = scenario_doc("wedding_p5");
    doc["constraints"]["vehicles"] = 2;
    EXPECT_EQ(validation_field(doc), "constraints.vehicles");

    doc = scenario_doc("travel");
    doc["kind"] = "cooking";
    EXPECT_EQ(validation_field(doc), "kind");

    doc = scenario_doc("travel");
    doc["constraints"]["destination"] = "Atlantis";
    EXPECT_EQ(validation_field(doc), "constraints.destination");

    doc = scenario_doc("travel");
    doc["data_tables"]["destinations"]["Seattle"]["hotels"][1].erase("nightly_rate");
    EXPECT_EQ(validation_field(doc), "data_tables.destinations.Seattle.hotels[1].nightly_rate");

    doc = scenario_doc("travel");
    doc["window"]["eviction"] = "lru";
    EXPECT_EQ(validation_field(doc), "window.eviction");

    doc = scenario_doc("travel");
    doc["call_policy"]["ca_calls"] = "whenever";
    EXPECT_EQ(validation_field(doc), "call_policy.ca_calls");

    doc = scenario_doc("travel");
    doc.erase("constraints");
    EXPECT_EQ(validation_field(doc), "constraints");
}

TEST(Scenario, SeedZeroIsTheDefaultQuery)
{
    const Scenario travel = load("travel");
    const Query q = travel.make_query(0);
    EXPECT_EQ(q.raw_text, travel.query_text);
    EXPECT_EQ(q.params["destination"], "Seattle");
    EXPECT_EQ(q.params["budget"], Value(1500));
    EXPECT_NO_THROW(q.validate());
}

TEST(Scenario, SeedsVaryDeterministically)
{
    const Scenario travel = load("travel");
    std::set<std::string> texts;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const Query a = travel.make_query(seed);
        EXPECT_EQ(a, travel.make_query(seed));
        EXPECT_NO_THROW(a.validate());
        texts.insert(a.raw_text);
    }
    EXPECT_GT(texts.size(), 30u);

    const Scenario wedding = load("wedding_p5");
    EXPECT_EQ(wedding.make_query(1), wedding.make_query(77));
}

TEST(Batching, MatchesBruteForceTripCount)
{
    for (std::size_t n = 0; n <= 8; ++n)
        for (int cap = 1; cap <= 4; ++cap) {
            const Schedule s = batch_requests(ready_at_zero(n), cap, 30);
            const std::size_t best = oracle::min_trips(n, static_cast<std::size_t>(cap));
            EXPECT_EQ(s.trips.size(), best) << "n=" << n << " cap=" << cap;
            EXPECT_EQ(s.makespan_min, static_cast<std::int64_t>(best) * 30);
        }
}

TEST(Batching, FeasibleForRandomReadyTimes)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<TransportRequest> reqs;
        const std::size_t n = rng() % 12;
        for (std::size_t i = 0; i < n; ++i)
            reqs.push_back({"r" + std::to_string(i), "o", "d", static_cast<std::int64_t>(rng() % 8) * 15,
                            rng() % 2 ? RequestSource::arrival : RequestSource::errand});
        const int cap = 1 + static_cast<int>(rng() % 4);
        const Schedule s = batch_requests(reqs, cap, 30);
        std::map<std::string, Value> out{{"schedule", s.to_value()}, {"arrivals", Value::array()}};
        for (const auto& r : reqs)
            out["arrivals"].push_back(r.to_value());
        for (const auto& c : check_constraints(QueryKind::wedding, {{"vehicle_capacity", cap}}, out))
            ASSERT_TRUE(c.satisfied) << c.name << ": " << c.detail;
        ASSERT_EQ(Schedule::from_value(s.to_value()), s);
        // Two riders share a trip only when the vehicle had to wait anyway
        // or capacity allows it; makespan never exceeds one trip per request.
        const Schedule solo = batch_requests(reqs, 1, 30);
        ASSERT_LE(s.makespan_min, solo.makespan_min);
    }
}

TEST(Batching, WeddingP5Makespans)
{
    const Scenario wedding = load("wedding_p5");
    std::vector<TransportRequest> reqs;
    for (const auto& stage : wedding.stages())
        if (stage.stage_id != "transport")
            for (const auto& v : stage_compute(wedding, stage, true)({}).output)
                reqs.push_back(TransportRequest::from_value(v));
    ASSERT_EQ(reqs.size(), 11u);
    const Schedule batched = batch_requests(reqs, 2, 30);
    const Schedule solo = batch_requests(reqs, 1, 30);
    EXPECT_EQ(batched.makespan_min, 180);
    EXPECT_EQ(solo.makespan_min, 330);
    EXPECT_EQ(coordination_score(batched), 1);
    EXPECT_EQ(coordination_score(solo), 0);
    EXPECT_EQ(batched.trips.size(), 6u);
    EXPECT_EQ(solo.trips.size(), 11u);
}

TEST(Batching, RejectsBadArguments)
{
    EXPECT_THROW(batch_requests({}, 0, 30), std::invalid_argument);
    EXPECT_THROW(batch_requests({}, 1, -1), std::invalid_argument);
    EXPECT_EQ(batch_requests({}, 2, 30).makespan_min, 0);
}

TEST(Servers, TravelStagesOnTheDefaultQuery)
{
    const Scenario travel = load("travel");
    const auto& st = travel.stages();
    std::map<std::string, Value> known;
    for (const auto& [k, v] : travel.constraints)
        known[constraint_key(k)] = v;

    const StageOutcome loc = stage_compute(travel, st[0], true)(inputs_for(st[0], known));
    ASSERT_FALSE(loc.failure);
    // 2 per day; the two adventurous picks lead, then by rating.
    ASSERT_EQ(loc.output["attractions"].size(), 6u);
    EXPECT_EQ(loc.output["attractions"][0]["name"], "Mount Rainier day hike");
    EXPECT_EQ(loc.output["attractions"][1]["name"], "Kayaking on Lake Union");
    EXPECT_EQ(loc.output["attractions"][2]["name"], "Pike Place Market");
    EXPECT_EQ(loc.output["attraction_cost"], Value(45 + 60 + 0 + 32 + 0 + 35));
    known["location"] = loc.output;

    const StageOutcome weather = stage_compute(travel, st[1], true)(inputs_for(st[1], known));
    ASSERT_EQ(weather.output["forecast"].size(), 3u);
    EXPECT_EQ(weather.output["forecast"][2]["day"], 3);

    const StageOutcome hotel = stage_compute(travel, st[2], true)(inputs_for(st[2], known));
    // The Edgewater costs 840 for two nights, above half of 1500.
    EXPECT_EQ(hotel.output["name"], "Hotel Max");
    EXPECT_EQ(hotel.output["cost"], Value(420));
    known["hotel"] = hotel.output;

    const StageOutcome dining = stage_compute(travel, st[3], true)(inputs_for(st[3], known));
    ASSERT_FALSE(dining.failure);
    EXPECT_EQ(dining.output["cost"], Value(95 + 45 + 25));
    for (const auto& meal : dining.output["meals"])
        EXPECT_NE(std::find(meal["tags"].begin(), meal["tags"].end(), Value("vegan")), meal["tags"].end());
}

TEST(Servers, DiningFailsWithoutAMatchingRestaurant)
{
    const Scenario travel = load("travel");
    const auto& st = travel.stages();
    StageInputs in{{"budget", 1500},
                   {"preferences", {"vegan", "vegetarian"}},
                   {"days", 2},
                   {"location", {{"destination", "Vancouver"}, {"attraction_cost", 0}}},
                   {"hotel", {{"cost", 1490}}}};
    const StageOutcome tight = stage_compute(travel, st[3], true)(in);
    ASSERT_TRUE(tight.failure);
    EXPECT_NE(tight.failure->find("budget"), std::string::npos);
    in["preferences"] = {"vegan", "halal"};
    in["hotel"] = {{"cost", 0}};
    EXPECT_FALSE(stage_compute(travel, st[3], true)(in).failure);
}

TEST(Servers, GatherReportsTheFirstMissingKey)
{
    const Scenario travel = load("travel");
    Snapshot snap;
    auto g = gather_inputs(travel.stages()[2], snap);
    ASSERT_TRUE(std::holds_alternative<std::string>(g));
    EXPECT_EQ(std::get<std::string>(g), "constraints.days");
}

TEST(Servers, TrackersPostTransportRequests)
{
    const Scenario wedding = load("wedding_p5");
    const StageOutcome arrivals = stage_compute(wedding, wedding.stages()[0], true)({});
    ASSERT_EQ(arrivals.publications.size(), 7u);
    EXPECT_EQ(arrivals.publications[0].key, "transport_request.g1");
    EXPECT_EQ(arrivals.publications[0].value["destination"], "Lakeside Lodge");
}

TEST(Servers, BuildServersPerMode)
{
    const Scenario travel = load("travel");
    const ServerSet ca = build_servers(travel, RunMode::context_aware);
    ASSERT_TRUE(std::holds_alternative<std::vector<ServerSpec>>(ca));
    EXPECT_EQ(std::get<std::vector<ServerSpec>>(ca)[3].done_key, "dining_done");
    const ServerSet trad = build_servers(travel, RunMode::traditional);
    ASSERT_TRUE(std::holds_alternative<std::vector<StatelessTool>>(trad));
    EXPECT_EQ(std::get<std::vector<StatelessTool>>(trad).size(), 4u);
}

TEST(Checks, DetectViolations)
{
    Schedule bad;
    TransportRequest a{"a", "o", "d", 60, RequestSource::arrival};
    TransportRequest b{"b", "o", "d", 0, RequestSource::errand};
    bad.trips.push_back({1, {a, b, b}, 0, 30});
    bad.makespan_min = 30;
    std::map<std::string, Value> out{{"schedule", bad.to_value()},
                                     {"arrivals", Value::array({a.to_value()})},
                                     {"errands", Value::array({b.to_value()})}};
    const Satisfaction s = evaluate_satisfaction(QueryKind::wedding, {"arrivals", "errands", "schedule"},
                                                 {{"vehicle_capacity", 2}}, out);
    EXPECT_DOUBLE_EQ(s.goal_satisfaction, 1.0);
    // capacity, readiness and coverage fail; the single trip cannot overlap.
    EXPECT_DOUBLE_EQ(s.constraint_satisfaction, 0.25);

    std::map<std::string, Value> trip{{"hotel", {{"cost", 900}, {"nights", 1}}},
                                      {"dining", {{"cost", 200}, {"meals", Value::array({{{"restaurant", "X"}, {"tags", Value::array()}}})}}}};
    const Satisfaction t = evaluate_satisfaction(
        QueryKind::travel, {"location", "weather", "hotel", "dining"},
        {{"budget", 1000}, {"days", 3}, {"preferences", {"vegan"}}}, trip);
    EXPECT_DOUBLE_EQ(t.goal_satisfaction, 0.5);
    EXPECT_DOUBLE_EQ(t.constraint_satisfaction, 0.0);
}
