#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camcp/plan_types.hpp"
#include "camcp/store.hpp"
#include "camcp/value.hpp"

namespace camcp {

enum class CallRole { plan, step_decision, summarize, combined };

std::string_view to_string(CallRole role);

struct CallRecord {
    std::int64_t call_index = 0;
    CallRole role = CallRole::plan;
    double simulated_latency_s = 0.0;
};

/// Simulated stand-in for wall-clock cost.
struct CostModel {
    double per_call_latency_s = 6.0;
    double per_tool_latency_s = 0.4;

    /// Throws std::invalid_argument on a negative latency.
    void validate() const;
    double latency(std::int64_t llm_calls, std::int64_t tool_execs) const
    {
        return static_cast<double>(llm_calls) * per_call_latency_s +
               static_cast<double>(tool_execs) * per_tool_latency_s;
    }
};

/// Counts planner round-trips. One network round-trip is one call whatever
/// its role. Safe to share between threads.
class CallCounter {
public:
    explicit CallCounter(CostModel cost = {}) : cost_(cost) {}

    CallRecord record(CallRole role);
    std::int64_t count() const;
    void reset();
    std::vector<CallRecord> records() const;
    const CostModel& cost() const noexcept { return cost_; }

private:
    CostModel cost_;
    mutable std::mutex mutex_;
    std::vector<CallRecord> records_;
};

/// Deterministic blueprint for a query: goals, constraints (all params except
/// the scenario reference) and the stage template of its kind. Uncounted.
PlanBlueprint blueprint_for(const Query& query);

/// Text rendering of a run's state. `state` maps store keys to values:
/// constraints under "constraints.<name>", stage outputs under their output
/// key. Every constraint of the blueprint is printed, "<missing>" if absent.
std::string render_summary(const std::map<std::string, Value>& state, const PlanBlueprint& blueprint);

std::map<std::string, Value> state_values(const Snapshot& snapshot);

/// The central planner/summarizer seat. Every member that stands for a model
/// round-trip records one call on the counter.
class Planner {
public:
    explicit Planner(CostModel cost = {}) : counter_(cost) {}
    virtual ~Planner() = default;

    /// Throws UnsupportedKind or SchemaError for an invalid query.
    virtual PlanBlueprint plan(const Query& query, CallRole role = CallRole::plan) = 0;

    /// Throws IncompleteContext when the completion key is absent.
    virtual std::string summarize(const Snapshot& snapshot, const PlanBlueprint& blueprint) = 0;

    /// Baseline orchestrator: choose the tool for the next stage given the
    /// keys visible in its context window. Returns the tool name.
    virtual std::string decide_step(const StageOutline& stage,
                                    std::span<const std::string> visible_keys) = 0;

    /// Baseline orchestrator: final answer from whatever it still knows.
    virtual std::string synthesize(const std::map<std::string, Value>& known,
                                   const PlanBlueprint& blueprint) = 0;

    std::int64_t call_count() const { return counter_.count(); }
    void reset_counter() { counter_.reset(); }
    CallCounter& counter() noexcept { return counter_; }
    const CallCounter& counter() const noexcept { return counter_; }

protected:
    CallCounter counter_;
};

/// Template-based planner: no model, fully deterministic.
class MockPlanner final : public Planner {
public:
    using Planner::Planner;

    PlanBlueprint plan(const Query& query, CallRole role = CallRole::plan) override;
    std::string summarize(const Snapshot& snapshot, const PlanBlueprint& blueprint) override;
    std::string decide_step(const StageOutline& stage,
                            std::span<const std::string> visible_keys) override;
    std::string synthesize(const std::map<std::string, Value>& known,
                           const PlanBlueprint& blueprint) override;
};

}  // namespace camcp
