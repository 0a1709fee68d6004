#include "camcp/plan_types.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "camcp/errors.hpp"

namespace camcp {

std::string_view to_string(QueryKind kind)
{
    return kind == QueryKind::travel ? "travel" : "wedding";
}

QueryKind parse_query_kind(std::string_view text)
{
    if (text == "travel")
        return QueryKind::travel;
    if (text == "wedding")
        return QueryKind::wedding;
    throw UnsupportedKind("unsupported query kind: " + std::string(text));
}

namespace detail {

std::string join_field(const std::string& parent, const std::string& name)
{
    return parent.empty() ? name : parent + "." + name;
}

const Value& require(const Value& obj, const std::string& name, const std::string& field)
{
    if (!obj.is_object() || !obj.contains(name))
        throw SchemaError(join_field(field, name), "missing field");
    return obj[name];
}

std::string require_text(const Value& obj, const std::string& name, const std::string& field)
{
    const Value& v = require(obj, name, field);
    if (!v.is_string())
        throw SchemaError(join_field(field, name), "expected text");
    return v.get<std::string>();
}

const Value& require_object(const Value& obj, const std::string& name, const std::string& field)
{
    const Value& v = require(obj, name, field);
    if (!v.is_object())
        throw SchemaError(join_field(field, name), "expected a map");
    return v;
}

const Value& require_list(const Value& obj, const std::string& name, const std::string& field)
{
    const Value& v = require(obj, name, field);
    if (!v.is_array())
        throw SchemaError(join_field(field, name), "expected a list");
    return v;
}

void reject_unknown(const Value& obj, std::initializer_list<std::string_view> known,
                    const std::string& field)
{
    for (const auto& [name, _] : obj.items()) {
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw SchemaError(join_field(field, name), "unexpected field");
    }
}

}  // namespace detail

using namespace detail;

void Query::validate() const
{
    if (!params.is_object())
        throw SchemaError("params", "expected a map");
    auto need = [&](const char* name, auto&& ok, const char* what) {
        if (!params.contains(name))
            throw SchemaError(std::string("params.") + name, "missing param");
        if (!ok(params[name]))
            throw SchemaError(std::string("params.") + name, what);
    };
    if (kind == QueryKind::travel) {
        need("destination", [](const Value& v) { return v.is_string(); }, "expected text");
        need("days", [](const Value& v) { return v.is_number_integer() && v.get<long long>() >= 1; },
             "expected an integer >= 1");
        need("budget", [](const Value& v) { return v.is_number() && v.get<double>() >= 0; },
             "expected a nonnegative number");
        if (params.contains("preferences")) {
            const Value& p = params["preferences"];
            if (!p.is_array() || !std::all_of(p.begin(), p.end(), [](const Value& x) { return x.is_string(); }))
                throw SchemaError("params.preferences", "expected a list of text");
        }
    } else {
        need("scenario", [](const Value& v) { return v.is_string(); }, "expected text");
    }
}

Value Query::to_value() const
{
    return Value{{"raw_text", raw_text}, {"kind", std::string(to_string(kind))}, {"params", params}};
}

Query Query::from_value(const Value& v, const std::string& field)
{
    if (!v.is_object())
        throw SchemaError(field, "expected a map");
    reject_unknown(v, {"raw_text", "kind", "params"}, field);
    Query q;
    q.raw_text = require_text(v, "raw_text", field);
    const std::string kind = require_text(v, "kind", field);
    if (kind != "travel" && kind != "wedding")
        throw SchemaError(join_field(field, "kind"), "unknown query kind");
    q.kind = parse_query_kind(kind);
    q.params = require_object(v, "params", field);
    if (!is_context_value(q.params))
        throw SchemaError(join_field(field, "params"), "not a context value");
    return q;
}

bool operator==(const Query& a, const Query& b)
{
    return a.raw_text == b.raw_text && a.kind == b.kind && values_equal(a.params, b.params);
}

Condition PlanBlueprint::completion_condition() const
{
    std::vector<Condition> all;
    for (const auto& stage : stages)
        all.push_back(Condition::equals(stage.done_key, true));
    return Condition::all_of(std::move(all));
}

void PlanBlueprint::validate() const
{
    std::map<std::string, std::size_t> producer;
    std::set<std::string> stage_ids;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const std::string field = "stages[" + std::to_string(i) + "]";
        if (stages[i].done_key.empty())
            throw SchemaError(field + ".done_key", "done key must be nonempty");
        if (!producer.emplace(stages[i].done_key, i).second)
            throw SchemaError(field + ".done_key", "duplicate done key");
        if (!stage_ids.insert(stages[i].stage_id).second)
            throw SchemaError(field + ".stage_id", "duplicate stage id");
    }
    if (completion_key.empty())
        throw SchemaError("completion_key", "completion key must be nonempty");
    if (producer.count(completion_key))
        throw SchemaError("completion_key", "completion key collides with a done key");

    // Kahn's algorithm over producer -> consumer edges.
    const std::size_t n = stages.size();
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t consumer = 0; consumer < n; ++consumer) {
        for (const auto& key : stages[consumer].trigger.keys()) {
            auto it = producer.find(key);
            if (it == producer.end())
                continue;
            out[it->second].push_back(consumer);
            ++indegree[consumer];
        }
    }
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0)
            frontier.push_back(i);
    }
    std::size_t visited = 0;
    while (!frontier.empty()) {
        const std::size_t at = frontier.back();
        frontier.pop_back();
        ++visited;
        for (std::size_t next : out[at]) {
            if (--indegree[next] == 0)
                frontier.push_back(next);
        }
    }
    if (visited != n)
        throw SchemaError("stages", "stage trigger graph has a cycle");
}

Value PlanBlueprint::to_value() const
{
    Value stage_list = Value::array();
    for (const auto& s : stages) {
        stage_list.push_back(Value{{"stage_id", s.stage_id},
                                   {"server_id", s.server_id},
                                   {"trigger", s.trigger.to_value()},
                                   {"done_key", s.done_key},
                                   {"output_key", s.output_key}});
    }
    Value constraint_map = Value::object();
    for (const auto& [name, value] : constraints)
        constraint_map[name] = value;
    return Value{{"goals", goals},
                 {"constraints", std::move(constraint_map)},
                 {"stages", std::move(stage_list)},
                 {"completion_key", completion_key}};
}

PlanBlueprint PlanBlueprint::from_value(const Value& v, const std::string& field)
{
    if (!v.is_object())
        throw SchemaError(field, "expected a map");
    reject_unknown(v, {"goals", "constraints", "stages", "completion_key"}, field);
    PlanBlueprint bp;
    const Value& goals = require_list(v, "goals", field);
    for (std::size_t i = 0; i < goals.size(); ++i) {
        if (!goals[i].is_string())
            throw SchemaError(join_field(field, "goals[" + std::to_string(i) + "]"), "expected text");
        bp.goals.push_back(goals[i].get<std::string>());
    }
    const Value& constraints = require_object(v, "constraints", field);
    for (const auto& [name, value] : constraints.items()) {
        if (!is_context_value(value))
            throw SchemaError(join_field(field, "constraints." + name), "not a context value");
        bp.constraints.emplace(name, value);
    }
    const Value& stages = require_list(v, "stages", field);
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const std::string at = join_field(field, "stages[" + std::to_string(i) + "]");
        const Value& s = stages[i];
        if (!s.is_object())
            throw SchemaError(at, "expected a map");
        reject_unknown(s, {"stage_id", "server_id", "trigger", "done_key", "output_key"}, at);
        StageOutline outline;
        outline.stage_id = require_text(s, "stage_id", at);
        outline.server_id = require_text(s, "server_id", at);
        outline.trigger = Condition::from_value(require(s, "trigger", at), join_field(at, "trigger"));
        outline.done_key = require_text(s, "done_key", at);
        outline.output_key = require_text(s, "output_key", at);
        bp.stages.push_back(std::move(outline));
    }
    bp.completion_key = require_text(v, "completion_key", field);
    return bp;
}

bool operator==(const PlanBlueprint& a, const PlanBlueprint& b)
{
    if (a.goals != b.goals || a.stages != b.stages || a.completion_key != b.completion_key ||
        a.constraints.size() != b.constraints.size())
        return false;
    return std::equal(a.constraints.begin(), a.constraints.end(), b.constraints.begin(),
                      [](const auto& x, const auto& y) {
                          return x.first == y.first && values_equal(x.second, y.second);
                      });
}

}  // namespace camcp
