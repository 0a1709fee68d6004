#include "camcp/runtime.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "camcp/catalog.hpp"
#include "camcp/reactor.hpp"
#include "camcp/servers.hpp"

namespace camcp {

namespace {

CostModel effective_cost(const Scenario& scenario, const RunOptions& options)
{
    CostModel cost = options.cost_model.value_or(scenario.cost_model);
    cost.validate();
    return cost;
}

Value cost_value(const CostModel& cost)
{
    return Value{{"per_call_latency_s", cost.per_call_latency_s},
                 {"per_tool_latency_s", cost.per_tool_latency_s}};
}

void run_start(TraceRecorder& rec, const Scenario& scenario, RunMode mode, std::uint64_t seed,
               const Query& query, const CostModel& cost)
{
    Value stages = Value::array();
    Value goal_keys = Value::array();
    for (const auto& s : scenario.stages()) {
        stages.push_back(s.stage_id);
        goal_keys.push_back(s.output_key);
    }
    rec.record(EventKind::run_start, Value{{"mode", to_string(mode)},
                                           {"seed", seed},
                                           {"scenario", scenario.name},
                                           {"kind", to_string(scenario.kind)},
                                           {"stages", std::move(stages)},
                                           {"goal_keys", std::move(goal_keys)},
                                           {"query", query.to_value()},
                                           {"cost_model", cost_value(cost)}});
}

void log_last_call(TraceRecorder& rec, const Planner& planner)
{
    const auto records = planner.counter().records();
    const CallRecord& call = records.back();
    rec.record(EventKind::llm_call, Value{{"index", call.call_index},
                                          {"role", to_string(call.role)},
                                          {"latency_s", call.simulated_latency_s}});
}

Trace finish(TraceRecorder& rec, RunMode mode, std::uint64_t seed, const CostModel& cost,
             const Planner& planner, std::int64_t calls_before, const std::string& status)
{
    const std::int64_t calls = planner.call_count() - calls_before;
    std::int64_t tools = 0;
    for (const auto& e : rec.events())
        tools += e.kind == EventKind::tool_exec ? 1 : 0;
    const double latency = cost.latency(calls, tools);
    rec.record(EventKind::run_end, Value{{"status", status},
                                         {"llm_calls", calls},
                                         {"tool_execs", tools},
                                         {"simulated_latency_s", latency}});
    Trace trace;
    trace.events = rec.events();
    trace.mode = mode;
    trace.seed = seed;
    trace.simulated_latency_s = latency;
    return trace;
}

}  // namespace

void seed_context(ContextStore& store, const PlanBlueprint& blueprint)
{
    std::vector<Write> writes;
    writes.push_back({"goals", Value(blueprint.goals)});
    for (const auto& [name, value] : blueprint.constraints)
        writes.push_back({constraint_key(name), value});
    Value stages = Value::array();
    for (const auto& s : blueprint.stages)
        stages.push_back(s.stage_id);
    writes.push_back({"stages", std::move(stages)});
    writes.push_back({std::string(kSeedFlag), true});
    store.put_batch(std::move(writes), "planner");
}

Trace run_context_aware(const Scenario& scenario, std::uint64_t seed, const RunOptions& options)
{
    MockPlanner planner(effective_cost(scenario, options));
    return run_context_aware(scenario, seed, planner, options);
}

Trace run_context_aware(const Scenario& scenario, std::uint64_t seed, Planner& planner, const RunOptions& options)
{
    const CostModel cost = effective_cost(scenario, options);
    const std::int64_t calls_before = planner.call_count();
    TraceRecorder rec;
    const Query query = scenario.make_query(seed);
    run_start(rec, scenario, RunMode::context_aware, seed, query, cost);

    rec.message("client", PlanRequest{query});
    const bool combined = scenario.call_policy.ca_calls == ContextAwareCalls::combined_single;
    const PlanBlueprint bp = planner.plan(query, combined ? CallRole::combined : CallRole::plan);
    log_last_call(rec, planner);

    std::vector<ServerSpec> servers = build_reactive_servers(scenario);
    for (const auto& s : servers)
        rec.message(s.server_id, s.declaration());
    rec.message("planner", ContextSeed{bp});

    ContextStore store;
    store.set_commit_observer([&rec](const ContextEntry& e) {
        rec.record(EventKind::scs_write, Value{{"key", e.key},
                                               {"version", e.version},
                                               {"writer", e.writer_id},
                                               {"store_t", e.logical_time}});
    });
    seed_context(store, bp);

    ReactorEngine engine(store, &rec);
    for (auto& s : servers)
        engine.register_server(std::move(s));
    engine.run_until_quiescent(options.max_steps, options.parallel_reactors);

    Snapshot snap = store.snapshot();
    std::string status = "complete";
    if (bp.completion_condition().evaluate(snap.entries)) {
        store.put(bp.completion_key, true, "client");
        rec.message("client", CompletionSignal{bp.completion_key});
        snap = store.snapshot();
        Value state = Value::object();
        for (const auto& [k, e] : snap.entries)
            state[k] = e.value;
        rec.message("client", SummaryRequest{std::move(state)});
        std::string text;
        if (combined) {
            text = render_summary(state_values(snap), bp);
        } else {
            text = planner.summarize(snap, bp);
            log_last_call(rec, planner);
        }
        rec.message("planner", FinalResponse{std::move(text)});
    } else {
        status = "incomplete_context";
        for (const auto& s : scenario.stages())
            if (engine.state(s.server_id) == ReactorState::idle)
                rec.record(EventKind::stage_failed,
                           Value{{"stage", s.stage_id}, {"server", s.server_id}, {"reason", "never triggered"}});
    }
    return finish(rec, RunMode::context_aware, seed, cost, planner, calls_before, status);
}

Trace run_traditional(const Scenario& scenario, std::uint64_t seed, const RunOptions& options)
{
    MockPlanner planner(effective_cost(scenario, options));
    return run_traditional(scenario, seed, planner, options);
}

Trace run_traditional(const Scenario& scenario, std::uint64_t seed, Planner& planner, const RunOptions& options)
{
    const CostModel cost = effective_cost(scenario, options);
    const WindowConfig window = options.window.value_or(scenario.window);
    if (window.enabled && window.budget_entries < 1)
        throw std::invalid_argument("window budget must be >= 1");
    const std::int64_t calls_before = planner.call_count();
    TraceRecorder rec;
    const Query query = scenario.make_query(seed);
    run_start(rec, scenario, RunMode::traditional, seed, query, cost);

    rec.message("client", PlanRequest{query});
    const bool per_stage = scenario.call_policy.traditional_calls == TraditionalCalls::per_stage_plus_synthesis;
    PlanBlueprint bp;
    if (per_stage) {
        bp = blueprint_for(query);
    } else {
        bp = planner.plan(query, CallRole::plan);
        log_last_call(rec, planner);
    }
    const std::vector<StatelessTool> tools = build_stateless_tools(scenario);
    for (const auto& t : tools)
        rec.message(t.stage.server_id, t.declaration());

    // Conversation history: the query exposes every constraint, then each
    // completed stage adds its output. Only the newest entries stay visible.
    std::deque<std::map<std::string, Value>> history;
    std::map<std::string, Value> query_entry;
    for (const auto& [name, value] : bp.constraints)
        query_entry[constraint_key(name)] = value;
    history.push_back(std::move(query_entry));
    auto visible = [&] {
        std::map<std::string, Value> out;
        for (const auto& entry : history)
            for (const auto& [k, v] : entry)
                out[k] = v;
        return out;
    };

    bool all_done = true;
    for (std::size_t i = 0; i < tools.size(); ++i) {
        const StageTemplate& stage = tools[i].stage;
        const std::map<std::string, Value> known = visible();
        if (per_stage) {
            std::vector<std::string> keys;
            for (const auto& [k, _] : known)
                keys.push_back(k);
            planner.decide_step(bp.stages.at(i), keys);
            log_last_call(rec, planner);
        }

        Snapshot view;
        for (const auto& [k, v] : known)
            view.entries.emplace(k, ContextEntry{k, v, 1, "history", 0});
        auto gathered = gather_inputs(stage, view);
        if (auto* missing = std::get_if<std::string>(&gathered)) {
            all_done = false;
            rec.record(EventKind::stage_failed, Value{{"stage", stage.stage_id},
                                                      {"server", stage.server_id},
                                                      {"reason", "context window lost " + *missing}});
            continue;
        }
        StageOutcome outcome = tools[i].compute(std::get<StageInputs>(gathered));
        for (std::size_t k = 0; k < outcome.invocations.size(); ++k)
            rec.record(EventKind::tool_exec, Value{{"server", stage.server_id},
                                                   {"stage", stage.stage_id},
                                                   {"tool", stage.tool.name},
                                                   {"call", k + 1}});
        if (outcome.failure) {
            all_done = false;
            rec.record(EventKind::stage_failed,
                       Value{{"stage", stage.stage_id}, {"server", stage.server_id}, {"reason", *outcome.failure}});
            continue;
        }
        rec.record(EventKind::stage_done, Value{{"stage", stage.stage_id},
                                                {"server", stage.server_id},
                                                {"outputs", Value{{stage.output_key, outcome.output}}}});
        history.push_back({{stage.output_key, std::move(outcome.output)}});
        if (window.enabled)
            while (history.size() > static_cast<std::size_t>(window.budget_entries))
                history.pop_front();
    }

    std::string text = planner.synthesize(visible(), bp);
    log_last_call(rec, planner);
    rec.message("planner", FinalResponse{std::move(text)});
    return finish(rec, RunMode::traditional, seed, cost, planner, calls_before,
                  all_done ? "complete" : "incomplete_context");
}

Trace run_mode(const Scenario& scenario, RunMode mode, std::uint64_t seed, const RunOptions& options)
{
    return mode == RunMode::context_aware ? run_context_aware(scenario, seed, options)
                                          : run_traditional(scenario, seed, options);
}

}  // namespace camcp
