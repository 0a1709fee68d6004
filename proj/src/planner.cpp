#include "camcp/planner.hpp"

#include <sstream>
#include <stdexcept>

#include "camcp/catalog.hpp"
#include "camcp/errors.hpp"

namespace camcp {

std::string_view to_string(CallRole role)
{
    switch (role) {
    case CallRole::plan:
        return "plan";
    case CallRole::step_decision:
        return "step_decision";
    case CallRole::summarize:
        return "summarize";
    case CallRole::combined:
        return "combined";
    }
    return "plan";
}

void CostModel::validate() const
{
    if (!(per_call_latency_s >= 0.0) || !(per_tool_latency_s >= 0.0))
        throw std::invalid_argument("cost model latencies must be nonnegative");
}

CallRecord CallCounter::record(CallRole role)
{
    std::lock_guard lock(mutex_);
    CallRecord rec{static_cast<std::int64_t>(records_.size()) + 1, role, cost_.per_call_latency_s};
    records_.push_back(rec);
    return rec;
}

std::int64_t CallCounter::count() const
{
    std::lock_guard lock(mutex_);
    return static_cast<std::int64_t>(records_.size());
}

void CallCounter::reset()
{
    std::lock_guard lock(mutex_);
    records_.clear();
}

std::vector<CallRecord> CallCounter::records() const
{
    std::lock_guard lock(mutex_);
    return records_;
}

PlanBlueprint blueprint_for(const Query& query)
{
    query.validate();
    PlanBlueprint bp;
    for (const auto& [name, value] : query.params.items()) {
        if (name != "scenario")
            bp.constraints.emplace(name, value);
    }
    for (const auto& stage : stage_catalog(query.kind)) {
        bp.goals.push_back(stage.goal);
        bp.stages.push_back(
            {stage.stage_id, stage.server_id, stage.trigger, stage.done_key, stage.output_key});
    }
    bp.completion_key = completion_key_for(query.kind);
    bp.validate();
    return bp;
}

std::map<std::string, Value> state_values(const Snapshot& snapshot)
{
    std::map<std::string, Value> out;
    for (const auto& [key, entry] : snapshot.entries)
        out.emplace(key, entry.value);
    return out;
}

std::string render_summary(const std::map<std::string, Value>& state, const PlanBlueprint& blueprint)
{
    std::ostringstream out;
    std::size_t done = 0;
    for (const auto& stage : blueprint.stages) {
        if (state.count(stage.output_key))
            ++done;
    }
    out << "Plan summary (" << blueprint.completion_key << ")\n";
    out << "Constraints:\n";
    for (const auto& [name, _] : blueprint.constraints) {
        auto it = state.find(constraint_key(name));
        out << "- " << name << ": " << (it == state.end() ? "<missing>" : canonical(it->second))
            << '\n';
    }
    out << "Goals:\n";
    for (std::size_t i = 0; i < blueprint.stages.size(); ++i) {
        const auto& stage = blueprint.stages[i];
        const bool met = state.count(stage.output_key) > 0;
        out << "- [" << (met ? "x" : " ") << "] "
            << (i < blueprint.goals.size() ? blueprint.goals[i] : stage.stage_id) << '\n';
    }
    out << "Stages:\n";
    for (const auto& stage : blueprint.stages) {
        auto it = state.find(stage.output_key);
        out << "- " << stage.stage_id << " (" << stage.server_id
            << "): " << (it == state.end() ? "not completed" : canonical(it->second)) << '\n';
    }
    out << "Completed " << done << " of " << blueprint.stages.size() << " stages.\n";
    return out.str();
}

PlanBlueprint MockPlanner::plan(const Query& query, CallRole role)
{
    PlanBlueprint bp = blueprint_for(query);
    counter_.record(role);
    return bp;
}

std::string MockPlanner::summarize(const Snapshot& snapshot, const PlanBlueprint& blueprint)
{
    if (!snapshot.contains(blueprint.completion_key))
        throw IncompleteContext("completion key '" + blueprint.completion_key +
                                "' absent; the run never completed");
    counter_.record(CallRole::summarize);
    return render_summary(state_values(snapshot), blueprint);
}

std::string MockPlanner::decide_step(const StageOutline& stage, std::span<const std::string>)
{
    counter_.record(CallRole::step_decision);
    for (const auto& t : stage_catalog(QueryKind::travel)) {
        if (t.stage_id == stage.stage_id)
            return t.tool.name;
    }
    for (const auto& t : stage_catalog(QueryKind::wedding)) {
        if (t.stage_id == stage.stage_id)
            return t.tool.name;
    }
    return stage.stage_id;
}

std::string MockPlanner::synthesize(const std::map<std::string, Value>& known,
                                    const PlanBlueprint& blueprint)
{
    counter_.record(CallRole::summarize);
    return render_summary(known, blueprint);
}

}  // namespace camcp
