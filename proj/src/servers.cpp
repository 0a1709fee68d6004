#include "camcp/servers.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "camcp/errors.hpp"

namespace camcp {

namespace {

std::vector<std::string> text_list(const StageInputs& in, const std::string& name)
{
    std::vector<std::string> out;
    if (auto it = in.find(name); it != in.end() && it->second.is_array())
        for (const auto& v : it->second)
            out.push_back(v.get<std::string>());
    return out;
}

std::int64_t trip_days(const StageInputs& in)
{
    auto it = in.find("days");
    return it == in.end() ? 3 : it->second.get<std::int64_t>();
}

std::size_t tag_matches(const Value& item, const std::vector<std::string>& wanted)
{
    std::size_t n = 0;
    for (const auto& tag : item["tags"])
        if (std::find(wanted.begin(), wanted.end(), tag.get<std::string>()) != wanted.end())
            ++n;
    return n;
}

StageOutcome fail(std::string reason)
{
    StageOutcome out;
    out.failure = std::move(reason);
    return out;
}

const Value* destination_table(const Scenario& sc, const StageInputs& in)
{
    auto it = in.find("destination");
    if (it == in.end())
        return nullptr;
    const Value& all = sc.data_tables["destinations"];
    auto d = all.find(it->second.get<std::string>());
    return d == all.end() ? nullptr : &*d;
}

StageOutcome recommend_locations(const Scenario& sc, const StageInputs& in)
{
    const Value* table = destination_table(sc, in);
    if (!table)
        return fail("unknown destination");
    const auto prefs = text_list(in, "preferences");
    std::vector<Value> ranked((*table)["attractions"].begin(), (*table)["attractions"].end());
    std::stable_sort(ranked.begin(), ranked.end(), [&](const Value& a, const Value& b) {
        const auto ma = tag_matches(a, prefs), mb = tag_matches(b, prefs);
        if (ma != mb)
            return ma > mb;
        if (a["rating"] != b["rating"])
            return a["rating"].get<double>() > b["rating"].get<double>();
        return a["name"].get<std::string>() < b["name"].get<std::string>();
    });
    const auto keep = std::min<std::size_t>(ranked.size(), static_cast<std::size_t>(2 * trip_days(in)));
    Value picks = Value::array();
    double cost = 0;
    for (std::size_t i = 0; i < keep; ++i) {
        picks.push_back(Value{{"name", ranked[i]["name"]}, {"cost", ranked[i]["cost"]}, {"tags", ranked[i]["tags"]}});
        cost += ranked[i]["cost"].get<double>();
    }
    StageOutcome out;
    out.output = Value{{"destination", in.at("destination")}, {"attractions", std::move(picks)}, {"attraction_cost", cost}};
    out.invocations.push_back(Value{{"destination", in.at("destination")}, {"preferences", prefs}});
    return out;
}

StageOutcome forecast_weather(const Scenario& sc, const StageInputs& in)
{
    const Value* table = destination_table(sc, in);
    if (!table)
        return fail("unknown destination");
    const Value& weather = (*table)["weather"];
    Value forecast = Value::array();
    for (std::int64_t day = 0; day < trip_days(in); ++day) {
        Value w = weather[static_cast<std::size_t>(day) % weather.size()];
        w["day"] = day + 1;
        forecast.push_back(std::move(w));
    }
    StageOutcome out;
    out.output = Value{{"destination", in.at("destination")}, {"forecast", std::move(forecast)}};
    out.invocations.push_back(Value{{"destination", in.at("destination")}, {"days", trip_days(in)}});
    return out;
}

std::int64_t nights_for(std::int64_t days)
{
    return std::max<std::int64_t>(1, days - 1);
}

StageOutcome book_hotel(const Scenario& sc, const StageInputs& in)
{
    const std::string destination = in.at("location")["destination"].get<std::string>();
    const Value& hotels = sc.data_tables["destinations"][destination]["hotels"];
    const std::int64_t nights = nights_for(trip_days(in));
    const double cap = in.at("budget").get<double>() * 0.5;

    std::vector<Value> ranked(hotels.begin(), hotels.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const Value& a, const Value& b) {
        if (a["rating"] != b["rating"])
            return a["rating"].get<double>() > b["rating"].get<double>();
        if (a["nightly_rate"] != b["nightly_rate"])
            return a["nightly_rate"].get<double>() < b["nightly_rate"].get<double>();
        return a["name"].get<std::string>() < b["name"].get<std::string>();
    });
    auto stay_cost = [&](const Value& h) { return h["nightly_rate"].get<double>() * static_cast<double>(nights); };
    auto choice = std::find_if(ranked.begin(), ranked.end(), [&](const Value& h) { return stay_cost(h) <= cap; });
    if (choice == ranked.end())
        choice = std::min_element(ranked.begin(), ranked.end(), [](const Value& a, const Value& b) {
            if (a["nightly_rate"] != b["nightly_rate"])
                return a["nightly_rate"].get<double>() < b["nightly_rate"].get<double>();
            return a["name"].get<std::string>() < b["name"].get<std::string>();
        });
    StageOutcome out;
    out.output = Value{{"name", (*choice)["name"]},
                       {"nightly_rate", (*choice)["nightly_rate"]},
                       {"nights", nights},
                       {"cost", stay_cost(*choice)}};
    out.invocations.push_back(Value{{"destination", destination}, {"nights", nights}, {"budget", in.at("budget")}});
    return out;
}

StageOutcome suggest_dining(const Scenario& sc, const StageInputs& in)
{
    const std::string destination = in.at("location")["destination"].get<std::string>();
    const Value& restaurants = sc.data_tables["destinations"][destination]["restaurants"];
    std::vector<std::string> diet;
    for (const auto& p : text_list(in, "preferences"))
        if (p == "vegan" || p == "vegetarian")
            diet.push_back(p);

    std::vector<Value> candidates;
    for (const auto& r : restaurants)
        if (tag_matches(r, diet) == diet.size())
            candidates.push_back(r);
    if (candidates.empty())
        return fail("no restaurant satisfies the dietary preferences");

    const double remaining = in.at("budget").get<double>() - in.at("hotel")["cost"].get<double>() -
                             in.at("location").value("attraction_cost", 0.0);
    const std::int64_t days = trip_days(in);
    auto plan_meals = [&](std::vector<Value> order) {
        Value meals = Value::array();
        double total = 0;
        for (std::int64_t day = 0; day < days; ++day) {
            const Value& r = order[static_cast<std::size_t>(day) % order.size()];
            meals.push_back(Value{{"day", day + 1}, {"restaurant", r["name"]}, {"cost", r["cost"]}, {"tags", r["tags"]}});
            total += r["cost"].get<double>();
        }
        return std::pair{meals, total};
    };
    std::stable_sort(candidates.begin(), candidates.end(), [](const Value& a, const Value& b) {
        if (a["rating"] != b["rating"])
            return a["rating"].get<double>() > b["rating"].get<double>();
        return a["name"].get<std::string>() < b["name"].get<std::string>();
    });
    auto [meals, total] = plan_meals(candidates);
    if (total > remaining) {
        std::stable_sort(candidates.begin(), candidates.end(), [](const Value& a, const Value& b) {
            if (a["cost"] != b["cost"])
                return a["cost"].get<double>() < b["cost"].get<double>();
            return a["name"].get<std::string>() < b["name"].get<std::string>();
        });
        std::tie(meals, total) = plan_meals(candidates);
    }
    if (total > remaining)
        return fail("dining exceeds the remaining budget");
    StageOutcome out;
    out.output = Value{{"meals", std::move(meals)}, {"cost", total}};
    out.invocations.push_back(Value{{"destination", destination}, {"diet", diet}, {"remaining_budget", remaining}});
    return out;
}

StageOutcome track(const Scenario& sc, bool arrivals)
{
    const std::string venue = sc.data_tables["venue"].get<std::string>();
    StageOutcome out;
    out.output = Value::array();
    for (const auto& item : sc.data_tables[arrivals ? "guests" : "errands"]) {
        TransportRequest r;
        r.request_id = item["id"].get<std::string>();
        r.origin = item["origin"].get<std::string>();
        r.destination = arrivals ? venue : item["destination"].get<std::string>();
        r.ready_time_min = item[arrivals ? "arrival_min" : "ready_min"].get<std::int64_t>();
        r.source = arrivals ? RequestSource::arrival : RequestSource::errand;
        out.output.push_back(r.to_value());
        out.publications.push_back({std::string(kTransportRequestPrefix) + r.request_id, r.to_value()});
    }
    out.invocations.push_back(Value{{"count", out.output.size()}});
    return out;
}

StageOutcome schedule_transport(const StageInputs& in, bool batched)
{
    std::vector<TransportRequest> requests;
    try {
        requests = collect_requests(in);
    } catch (const SchemaError& e) {
        return fail(std::string("bad transport request: ") + e.what());
    }
    const auto capacity = in.at("vehicle_capacity").get<int>();
    const auto duration = in.at("trip_duration_min").get<std::int64_t>();
    StageOutcome out;
    const Schedule schedule = batch_requests(requests, batched ? capacity : 1, duration);
    out.output = schedule.to_value();
    if (batched) {
        out.invocations.push_back(Value{{"requests", requests.size()}, {"capacity", capacity}});
    } else {
        for (const auto& trip : schedule.trips)
            out.invocations.push_back(Value{{"request_id", trip.requests.front().request_id}, {"trip_id", trip.trip_id}});
    }
    return out;
}

}  // namespace

std::vector<TransportRequest> collect_requests(const StageInputs& inputs)
{
    std::vector<TransportRequest> out;
    const std::string prefix(kTransportRequestPrefix);
    for (const auto& [key, v] : inputs)
        if (key.rfind(prefix, 0) == 0)
            out.push_back(TransportRequest::from_value(v, key));
    if (!out.empty())
        return out;
    for (const char* list : {"arrivals", "errands"})
        if (auto it = inputs.find(list); it != inputs.end())
            for (std::size_t i = 0; i < it->second.size(); ++i)
                out.push_back(TransportRequest::from_value(it->second[i], std::string(list) + "[" + std::to_string(i) + "]"));
    return out;
}

StageCompute stage_compute(const Scenario& scenario, const StageTemplate& stage, bool batched)
{
    const Scenario* sc = &scenario;
    const std::string& tool = stage.tool.name;
    if (tool == "recommend_locations")
        return [sc](const StageInputs& in) { return recommend_locations(*sc, in); };
    if (tool == "forecast_weather")
        return [sc](const StageInputs& in) { return forecast_weather(*sc, in); };
    if (tool == "book_hotel")
        return [sc](const StageInputs& in) { return book_hotel(*sc, in); };
    if (tool == "suggest_dining")
        return [sc](const StageInputs& in) { return suggest_dining(*sc, in); };
    if (tool == "track_arrivals")
        return [sc](const StageInputs&) { return track(*sc, true); };
    if (tool == "track_errands")
        return [sc](const StageInputs&) { return track(*sc, false); };
    if (tool == "schedule_transport")
        return [batched](const StageInputs& in) { return schedule_transport(in, batched); };
    throw UnsupportedKind("no compute for tool " + tool);
}

std::variant<StageInputs, std::string> gather_inputs(const StageTemplate& stage, const Snapshot& snapshot)
{
    StageInputs in;
    for (const auto& c : stage.required_constraints) {
        const ContextEntry* e = snapshot.find(constraint_key(c));
        if (!e)
            return constraint_key(c);
        in[c] = e->value;
    }
    for (const auto& c : stage.optional_constraints)
        if (const ContextEntry* e = snapshot.find(constraint_key(c)))
            in[c] = e->value;
    for (const auto& k : stage.required_inputs) {
        const ContextEntry* e = snapshot.find(k);
        if (!e)
            return k;
        in[k] = e->value;
    }
    for (const auto& prefix : stage.input_prefixes)
        for (auto it = snapshot.entries.lower_bound(prefix);
             it != snapshot.entries.end() && it->first.rfind(prefix, 0) == 0; ++it)
            in[it->first] = it->second.value;
    return in;
}

std::vector<ServerSpec> build_reactive_servers(const Scenario& scenario)
{
    std::vector<ServerSpec> servers;
    for (const auto& stage : scenario.stages()) {
        StageCompute compute = stage_compute(scenario, stage, true);
        Action action = [stage, compute](const Snapshot& snap) {
            auto gathered = gather_inputs(stage, snap);
            if (auto* missing = std::get_if<std::string>(&gathered))
                return ActionResult::failed("missing " + *missing);
            StageOutcome outcome = compute(std::get<StageInputs>(gathered));
            if (outcome.failure)
                return ActionResult::failed(*outcome.failure);
            std::vector<Write> writes = std::move(outcome.publications);
            writes.push_back({stage.output_key, std::move(outcome.output)});
            return ActionResult::success(std::move(writes), stage.done_key);
        };
        servers.push_back({stage.server_id, {stage.tool}, stage.trigger, std::move(action), stage.done_key, stage.stage_id});
    }
    return servers;
}

std::vector<StatelessTool> build_stateless_tools(const Scenario& scenario)
{
    std::vector<StatelessTool> tools;
    for (const auto& stage : scenario.stages())
        tools.push_back({stage, stage_compute(scenario, stage, false)});
    return tools;
}

ServerSet build_servers(const Scenario& scenario, RunMode mode)
{
    if (mode == RunMode::context_aware)
        return build_reactive_servers(scenario);
    return build_stateless_tools(scenario);
}

}  // namespace camcp
