#include "camcp/scenario.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "camcp/errors.hpp"

namespace camcp {

std::string_view to_string(TraditionalCalls policy)
{
    return policy == TraditionalCalls::per_stage_plus_synthesis ? "per_stage_plus_synthesis"
                                                                : "single_orchestration_plus_synthesis";
}

std::string_view to_string(ContextAwareCalls policy)
{
    return policy == ContextAwareCalls::plan_and_summarize ? "plan_and_summarize" : "combined_single";
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what)
{
    throw ScenarioValidationError(field, what);
}

const Value& member(const Value& obj, const std::string& name, const std::string& field)
{
    auto it = obj.find(name);
    if (it == obj.end())
        invalid(field.empty() ? name : field + "." + name, "missing");
    return *it;
}

std::string text_member(const Value& obj, const std::string& name, const std::string& field)
{
    const Value& v = member(obj, name, field);
    if (!v.is_string() || v.get<std::string>().empty())
        invalid(field + "." + name, "expected non-empty text");
    return v.get<std::string>();
}

double number_member(const Value& obj, const std::string& name, const std::string& field, double min)
{
    const Value& v = member(obj, name, field);
    if (!v.is_number() || v.get<double>() < min)
        invalid(field + "." + name, "expected a number >= " + std::to_string(static_cast<long long>(min)));
    return v.get<double>();
}

std::int64_t int_member(const Value& obj, const std::string& name, const std::string& field, std::int64_t min)
{
    const Value& v = member(obj, name, field);
    if (!v.is_number_integer() || v.get<std::int64_t>() < min)
        invalid(field + "." + name, "expected an integer >= " + std::to_string(min));
    return v.get<std::int64_t>();
}

const Value& list_member(const Value& obj, const std::string& name, const std::string& field, bool nonempty)
{
    const Value& v = member(obj, name, field);
    if (!v.is_array())
        invalid(field + "." + name, "expected a list");
    if (nonempty && v.empty())
        invalid(field + "." + name, "must not be empty");
    return v;
}

void check_tags(const Value& item, const std::string& field)
{
    const Value& tags = list_member(item, "tags", field, false);
    for (const auto& t : tags)
        if (!t.is_string())
            invalid(field + ".tags", "expected a list of text");
}

void validate_destination(const Value& d, const std::string& field)
{
    if (!d.is_object())
        invalid(field, "expected a map");
    const Value& attractions = list_member(d, "attractions", field, true);
    for (std::size_t i = 0; i < attractions.size(); ++i) {
        const std::string at = field + ".attractions[" + std::to_string(i) + "]";
        text_member(attractions[i], "name", at);
        number_member(attractions[i], "cost", at, 0);
        number_member(attractions[i], "rating", at, 0);
        check_tags(attractions[i], at);
    }
    const Value& hotels = list_member(d, "hotels", field, true);
    for (std::size_t i = 0; i < hotels.size(); ++i) {
        const std::string at = field + ".hotels[" + std::to_string(i) + "]";
        text_member(hotels[i], "name", at);
        number_member(hotels[i], "nightly_rate", at, 0);
        number_member(hotels[i], "rating", at, 0);
    }
    const Value& restaurants = list_member(d, "restaurants", field, true);
    for (std::size_t i = 0; i < restaurants.size(); ++i) {
        const std::string at = field + ".restaurants[" + std::to_string(i) + "]";
        text_member(restaurants[i], "name", at);
        number_member(restaurants[i], "cost", at, 0);
        number_member(restaurants[i], "rating", at, 0);
        check_tags(restaurants[i], at);
    }
    const Value& weather = list_member(d, "weather", field, true);
    for (std::size_t i = 0; i < weather.size(); ++i) {
        const std::string at = field + ".weather[" + std::to_string(i) + "]";
        text_member(weather[i], "summary", at);
        number_member(weather[i], "high_c", at, -100);
        number_member(weather[i], "low_c", at, -100);
    }
}

void validate_travel(Scenario& s)
{
    const Value& destinations = member(s.data_tables, "destinations", "data_tables");
    if (!destinations.is_object() || destinations.empty())
        invalid("data_tables.destinations", "expected a non-empty map");
    for (const auto& [name, d] : destinations.items())
        validate_destination(d, "data_tables.destinations." + name);

    Query q{s.query_text, QueryKind::travel, Value::object()};
    for (const auto& [k, v] : s.constraints)
        q.params[k] = v;
    try {
        q.validate();
    } catch (const SchemaError& e) {
        std::string name = e.field();
        if (name.rfind("params.", 0) == 0)
            name.erase(0, 7);
        invalid("constraints." + name, e.what());
    }
    if (!destinations.contains(q.params["destination"].get<std::string>()))
        invalid("constraints.destination", "not in data_tables.destinations");

    Value& var = s.variations;
    if (!var.is_object())
        invalid("variations", "expected a map");
    if (!var.contains("destinations")) {
        var["destinations"] = Value::array();
        for (const auto& [name, _] : destinations.items())
            var["destinations"].push_back(name);
    }
    for (const auto& d : list_member(var, "destinations", "variations", true))
        if (!d.is_string() || !destinations.contains(d.get<std::string>()))
            invalid("variations.destinations", "every entry must name a destination");
    if (!var.contains("days"))
        var["days"] = Value::array({q.params["days"]});
    for (const auto& d : list_member(var, "days", "variations", true))
        if (!d.is_number_integer() || d.get<std::int64_t>() < 1)
            invalid("variations.days", "expected integers >= 1");
    if (!var.contains("budgets"))
        var["budgets"] = Value::array({q.params["budget"]});
    for (const auto& b : list_member(var, "budgets", "variations", true))
        if (!b.is_number() || b.get<double>() < 0)
            invalid("variations.budgets", "expected numbers >= 0");
    if (!var.contains("preference_sets"))
        var["preference_sets"] = Value::array({q.params.value("preferences", Value::array())});
    for (const auto& p : list_member(var, "preference_sets", "variations", true)) {
        if (!p.is_array())
            invalid("variations.preference_sets", "expected lists of text");
        for (const auto& t : p)
            if (!t.is_string())
                invalid("variations.preference_sets", "expected lists of text");
    }
}

void validate_wedding(const Scenario& s)
{
    auto constraint = [&](const char* name) -> const Value& {
        auto it = s.constraints.find(name);
        if (it == s.constraints.end())
            invalid(std::string("constraints.") + name, "missing");
        return it->second;
    };
    for (const char* name : {"vehicle_capacity", "trip_duration_min"}) {
        const Value& v = constraint(name);
        if (!v.is_number_integer() || v.get<std::int64_t>() < 1)
            invalid(std::string("constraints.") + name, "expected an integer >= 1");
    }
    if (auto it = s.constraints.find("vehicles"); it != s.constraints.end())
        if (!it->second.is_number_integer() || it->second.get<std::int64_t>() != 1)
            invalid("constraints.vehicles", "only a single vehicle is supported");

    text_member(s.data_tables, "venue", "data_tables");
    std::set<std::string> ids;
    const Value& guests = list_member(s.data_tables, "guests", "data_tables", false);
    for (std::size_t i = 0; i < guests.size(); ++i) {
        const std::string at = "data_tables.guests[" + std::to_string(i) + "]";
        if (!ids.insert(text_member(guests[i], "id", at)).second)
            invalid(at + ".id", "duplicate request id");
        text_member(guests[i], "name", at);
        text_member(guests[i], "origin", at);
        int_member(guests[i], "arrival_min", at, 0);
    }
    const Value& errands = list_member(s.data_tables, "errands", "data_tables", false);
    for (std::size_t i = 0; i < errands.size(); ++i) {
        const std::string at = "data_tables.errands[" + std::to_string(i) + "]";
        if (!ids.insert(text_member(errands[i], "id", at)).second)
            invalid(at + ".id", "duplicate request id");
        text_member(errands[i], "description", at);
        text_member(errands[i], "origin", at);
        text_member(errands[i], "destination", at);
        int_member(errands[i], "ready_min", at, 0);
    }
}

std::string preference_phrase(const Value& prefs)
{
    std::string out;
    for (std::size_t i = 0; i < prefs.size(); ++i) {
        if (i > 0)
            out += i + 1 == prefs.size() ? " and " : ", ";
        out += prefs[i].get<std::string>();
    }
    return out;
}

}  // namespace

Query Scenario::make_query(std::uint64_t seed) const
{
    Query q{query_text, kind, Value::object()};
    for (const auto& [k, v] : constraints)
        q.params[k] = v;
    if (kind == QueryKind::wedding) {
        q.params["scenario"] = name;
        return q;
    }
    if (seed == 0)
        return q;

    std::mt19937_64 rng(seed);
    auto pick = [&](const Value& list) -> const Value& { return list[rng() % list.size()]; };
    q.params["destination"] = pick(variations["destinations"]);
    q.params["days"] = pick(variations["days"]);
    q.params["budget"] = pick(variations["budgets"]);
    q.params["preferences"] = pick(variations["preference_sets"]);

    std::ostringstream text;
    text << "Plan a " << q.params["days"].get<std::int64_t>() << "-day trip around "
         << q.params["destination"].get<std::string>();
    if (!q.params["preferences"].empty())
        text << " with " << preference_phrase(q.params["preferences"]);
    text << " and a $" << canonical(q.params["budget"]) << " budget.";
    q.raw_text = text.str();
    return q;
}

Scenario parse_scenario(const Value& doc)
{
    if (!doc.is_object())
        invalid("<root>", "expected a map");
    Scenario s;
    s.name = text_member(doc, "name", "");
    const std::string kind_text = text_member(doc, "kind", "");
    try {
        s.kind = parse_query_kind(kind_text);
    } catch (const UnsupportedKind&) {
        invalid("kind", "unsupported kind '" + kind_text + "'");
    }
    s.query_text = text_member(doc, "query_text", "");

    if (s.kind == QueryKind::wedding)
        s.call_policy = {TraditionalCalls::single_orchestration_plus_synthesis, ContextAwareCalls::combined_single};
    if (auto it = doc.find("call_policy"); it != doc.end()) {
        if (!it->is_object())
            invalid("call_policy", "expected a map");
        if (auto t = it->find("traditional_calls"); t != it->end()) {
            if (*t == "per_stage_plus_synthesis")
                s.call_policy.traditional_calls = TraditionalCalls::per_stage_plus_synthesis;
            else if (*t == "single_orchestration_plus_synthesis")
                s.call_policy.traditional_calls = TraditionalCalls::single_orchestration_plus_synthesis;
            else
                invalid("call_policy.traditional_calls", "unknown policy");
        }
        if (auto c = it->find("ca_calls"); c != it->end()) {
            if (*c == "plan_and_summarize")
                s.call_policy.ca_calls = ContextAwareCalls::plan_and_summarize;
            else if (*c == "combined_single")
                s.call_policy.ca_calls = ContextAwareCalls::combined_single;
            else
                invalid("call_policy.ca_calls", "unknown policy");
        }
    }

    if (auto it = doc.find("window"); it != doc.end()) {
        if (!it->is_object())
            invalid("window", "expected a map");
        if (auto e = it->find("enabled"); e != it->end()) {
            if (!e->is_boolean())
                invalid("window.enabled", "expected true or false");
            s.window.enabled = e->get<bool>();
        }
        if (it->contains("budget_entries"))
            s.window.budget_entries = static_cast<int>(int_member(*it, "budget_entries", "window", 1));
        if (auto ev = it->find("eviction"); ev != it->end() && *ev != "fifo")
            invalid("window.eviction", "only fifo is supported");
    }

    if (auto it = doc.find("cost_model"); it != doc.end()) {
        if (!it->is_object())
            invalid("cost_model", "expected a map");
        if (it->contains("per_call_latency_s"))
            s.cost_model.per_call_latency_s = number_member(*it, "per_call_latency_s", "cost_model", 0);
        if (it->contains("per_tool_latency_s"))
            s.cost_model.per_tool_latency_s = number_member(*it, "per_tool_latency_s", "cost_model", 0);
    }

    const Value& constraints = member(doc, "constraints", "");
    if (!constraints.is_object())
        invalid("constraints", "expected a map");
    for (const auto& [k, v] : constraints.items())
        s.constraints.emplace(k, v);

    s.data_tables = member(doc, "data_tables", "");
    if (!s.data_tables.is_object())
        invalid("data_tables", "expected a map");
    if (auto it = doc.find("variations"); it != doc.end())
        s.variations = *it;

    if (s.kind == QueryKind::travel)
        validate_travel(s);
    else
        validate_wedding(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioParseError("cannot open scenario file " + path.string());
    Value doc;
    try {
        doc = Value::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioParseError(path.string() + ": " + e.what());
    }
    return parse_scenario(doc);
}

}  // namespace camcp
