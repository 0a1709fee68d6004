#include "camcp/checks.hpp"

#include <algorithm>
#include <set>

#include "camcp/schedule.hpp"

namespace camcp {

namespace {

const Value* find(const std::map<std::string, Value>& m, const std::string& key)
{
    auto it = m.find(key);
    return it == m.end() ? nullptr : &it->second;
}

std::vector<CheckResult> travel_checks(const std::map<std::string, Value>& c,
                                       const std::map<std::string, Value>& out)
{
    std::vector<CheckResult> checks;

    CheckResult budget{"within_budget", true, ""};
    const Value* limit = find(c, "budget");
    double spent = 0;
    for (const auto& [key, field] : {std::pair{"location", "attraction_cost"}, {"hotel", "cost"}, {"dining", "cost"}})
        if (const Value* v = find(out, key); v && v->contains(field))
            spent += (*v)[field].get<double>();
    if (limit && spent > limit->get<double>()) {
        budget.satisfied = false;
        budget.detail = "spent " + canonical(spent) + " of " + canonical(*limit);
    }
    checks.push_back(budget);

    CheckResult diet{"dietary_preferences", true, ""};
    std::vector<std::string> wanted;
    if (const Value* prefs = find(c, "preferences"))
        for (const auto& p : *prefs)
            if (p == "vegan" || p == "vegetarian")
                wanted.push_back(p.get<std::string>());
    if (const Value* dining = find(out, "dining"); dining && !wanted.empty()) {
        for (const auto& meal : (*dining)["meals"])
            for (const auto& w : wanted)
                if (std::find(meal["tags"].begin(), meal["tags"].end(), Value(w)) == meal["tags"].end()) {
                    diet.satisfied = false;
                    diet.detail = meal["restaurant"].get<std::string>() + " is not " + w;
                }
    }
    checks.push_back(diet);

    CheckResult nights{"hotel_covers_trip", true, ""};
    const Value* days = find(c, "days");
    if (const Value* hotel = find(out, "hotel"); hotel && days) {
        const auto want = std::max<std::int64_t>(1, days->get<std::int64_t>() - 1);
        if ((*hotel)["nights"].get<std::int64_t>() != want) {
            nights.satisfied = false;
            nights.detail = "booked " + canonical((*hotel)["nights"]) + " nights";
        }
    }
    checks.push_back(nights);
    return checks;
}

std::vector<CheckResult> wedding_checks(const std::map<std::string, Value>& c,
                                        const std::map<std::string, Value>& out)
{
    CheckResult capacity{"vehicle_capacity", true, ""};
    CheckResult ready{"pickup_after_ready", true, ""};
    CheckResult coverage{"every_request_served", true, ""};
    CheckResult single{"single_vehicle", true, ""};

    const Value* sched = find(out, "schedule");
    if (sched) {
        const Schedule s = Schedule::from_value(*sched);
        const auto cap = find(c, "vehicle_capacity");
        std::multiset<std::string> served;
        std::int64_t prev_end = 0;
        for (const auto& trip : s.trips) {
            if (cap && static_cast<std::int64_t>(trip.requests.size()) > cap->get<std::int64_t>()) {
                capacity.satisfied = false;
                capacity.detail = "trip " + std::to_string(trip.trip_id) + " over capacity";
            }
            if (trip.start_min < prev_end) {
                single.satisfied = false;
                single.detail = "trip " + std::to_string(trip.trip_id) + " overlaps";
            }
            prev_end = trip.end_min();
            for (const auto& r : trip.requests) {
                if (trip.start_min < r.ready_time_min) {
                    ready.satisfied = false;
                    ready.detail = r.request_id + " picked up early";
                }
                served.insert(r.request_id);
            }
        }
        std::multiset<std::string> expected;
        for (const char* list : {"arrivals", "errands"})
            if (const Value* v = find(out, list))
                for (const auto& r : *v)
                    expected.insert(r["request_id"].get<std::string>());
        if (!expected.empty() && served != expected) {
            coverage.satisfied = false;
            coverage.detail = "served " + std::to_string(served.size()) + " of " + std::to_string(expected.size());
        }
    }
    return {capacity, ready, coverage, single};
}

}  // namespace

std::vector<CheckResult> check_constraints(QueryKind kind,
                                           const std::map<std::string, Value>& constraints,
                                           const std::map<std::string, Value>& outputs)
{
    return kind == QueryKind::travel ? travel_checks(constraints, outputs) : wedding_checks(constraints, outputs);
}

Satisfaction evaluate_satisfaction(QueryKind kind,
                                   const std::vector<std::string>& goal_keys,
                                   const std::map<std::string, Value>& constraints,
                                   const std::map<std::string, Value>& outputs)
{
    Satisfaction s;
    std::size_t present = 0;
    for (const auto& k : goal_keys)
        present += outputs.count(k);
    s.goal_satisfaction = goal_keys.empty() ? 1.0 : static_cast<double>(present) / static_cast<double>(goal_keys.size());
    s.checks = check_constraints(kind, constraints, outputs);
    std::size_t ok = 0;
    for (const auto& c : s.checks)
        ok += c.satisfied ? 1 : 0;
    s.constraint_satisfaction = s.checks.empty() ? 1.0 : static_cast<double>(ok) / static_cast<double>(s.checks.size());
    return s;
}

}  // namespace camcp
