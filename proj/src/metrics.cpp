#include "camcp/metrics.hpp"

#include <cmath>
#include <fstream>
#include <numeric>

#include "camcp/errors.hpp"
#include "camcp/planner.hpp"
#include "camcp/schedule.hpp"

namespace camcp {

Value RunMetrics::to_value() const
{
    return Value{{"scenario", scenario},
                 {"mode", to_string(mode)},
                 {"seed", seed},
                 {"llm_calls", llm_calls},
                 {"tool_execs", tool_execs},
                 {"completeness", completeness},
                 {"simulated_latency_s", simulated_latency_s},
                 {"makespan_min", makespan_min ? Value(*makespan_min) : Value()},
                 {"coordination", coordination ? Value(*coordination) : Value()},
                 {"goal_satisfaction", goal_satisfaction},
                 {"constraint_satisfaction", constraint_satisfaction}};
}

RunMetrics compute_metrics(const Trace& trace)
{
    trace.validate();
    const TraceEvent& start = trace.events.front();
    RunMetrics m;
    std::vector<std::string> goal_keys;
    std::map<std::string, Value> constraints;
    QueryKind kind;
    CostModel cost;
    std::size_t stages_total = 0;
    try {
        m.scenario = start.payload.at("scenario").get<std::string>();
        m.mode = parse_run_mode(start.payload.at("mode").get<std::string>());
        m.seed = start.payload.at("seed").get<std::uint64_t>();
        kind = parse_query_kind(start.payload.at("kind").get<std::string>());
        stages_total = start.payload.at("stages").size();
        goal_keys = start.payload.at("goal_keys").get<std::vector<std::string>>();
        for (const auto& [k, v] : start.payload.at("query").at("params").items())
            if (k != "scenario")
                constraints.emplace(k, v);
        cost.per_call_latency_s = start.payload.at("cost_model").at("per_call_latency_s").get<double>();
        cost.per_tool_latency_s = start.payload.at("cost_model").at("per_tool_latency_s").get<double>();
    } catch (const std::exception& e) {
        throw MalformedTrace(1, std::string("bad run_start payload: ") + e.what());
    }
    if (stages_total == 0)
        throw MalformedTrace(1, "run_start lists no stages");

    std::map<std::string, Value> outputs;
    std::size_t done = 0;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const TraceEvent& e = trace.events[i];
        switch (e.kind) {
        case EventKind::llm_call:
            ++m.llm_calls;
            break;
        case EventKind::tool_exec:
            ++m.tool_execs;
            break;
        case EventKind::stage_done: {
            ++done;
            auto it = e.payload.find("outputs");
            if (it == e.payload.end() || !it->is_object())
                throw MalformedTrace(i + 1, "stage_done without outputs");
            for (const auto& [k, v] : it->items())
                outputs[k] = v;
            break;
        }
        default:
            break;
        }
    }
    if (done > stages_total)
        throw MalformedTrace(trace.events.size(), "more completed stages than planned");
    m.completeness = static_cast<double>(done) / static_cast<double>(stages_total);
    m.simulated_latency_s = cost.latency(m.llm_calls, m.tool_execs);
    if (std::abs(m.simulated_latency_s - trace.simulated_latency_s) > 1e-9)
        throw MalformedTrace(trace.events.size(), "run_end latency disagrees with logged calls and tool executions");

    if (auto it = outputs.find("schedule"); it != outputs.end()) {
        try {
            const Schedule s = Schedule::from_value(it->second);
            m.makespan_min = s.makespan_min;
            m.coordination = coordination_score(s);
        } catch (const SchemaError& e) {
            throw MalformedTrace(trace.events.size(), std::string("bad schedule output: ") + e.what());
        }
    }
    const Satisfaction sat = evaluate_satisfaction(kind, goal_keys, constraints, outputs);
    m.goal_satisfaction = sat.goal_satisfaction;
    m.constraint_satisfaction = sat.constraint_satisfaction;
    return m;
}

RunMetrics compute_metrics(const Trace& trace, const Scenario& scenario)
{
    RunMetrics m = compute_metrics(trace);
    const Value& start = trace.events.front().payload;
    if (m.scenario != scenario.name || start.at("kind") != to_string(scenario.kind) ||
        start.at("stages").size() != scenario.stages().size())
        throw MalformedTrace(1, "trace was not produced from scenario " + scenario.name);
    return m;
}

RunMetrics replay(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw MalformedTrace(0, "cannot open " + path.string());
    return compute_metrics(Trace::parse(in));
}

Value PairedStats::to_value() const
{
    return Value{{"n", n}, {"mean_diff", mean_diff}, {"sd", sd}, {"t_stat", t_stat ? Value(*t_stat) : Value()}};
}

PairedStats paired_stats(std::span<const double> diffs)
{
    if (diffs.size() < 2)
        throw InsufficientData("paired statistics need at least two diffs, got " + std::to_string(diffs.size()));
    PairedStats s;
    s.n = diffs.size();
    const double n = static_cast<double>(s.n);
    s.mean_diff = std::accumulate(diffs.begin(), diffs.end(), 0.0) / n;
    double ss = 0;
    for (double d : diffs)
        ss += (d - s.mean_diff) * (d - s.mean_diff);
    s.sd = std::sqrt(ss / (n - 1));
    if (s.sd > 0)
        s.t_stat = s.mean_diff / (s.sd / std::sqrt(n));
    return s;
}

}  // namespace camcp
