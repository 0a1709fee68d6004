#pragma once

#include <cstdint>
#include <optional>

#include "camcp/planner.hpp"
#include "camcp/scenario.hpp"
#include "camcp/store.hpp"
#include "camcp/trace.hpp"

namespace camcp {

struct RunOptions {
    /// Overrides the scenario's window (baseline only).
    std::optional<WindowConfig> window;
    /// Overrides the scenario's cost model.
    std::optional<CostModel> cost_model;
    int max_steps = 64;
    /// Fire ready reactors concurrently (context-aware only).
    bool parallel_reactors = false;
};

/// Writes goals, constraints.<name>, stages and the seed flag as one atomic
/// batch from the planner.
void seed_context(ContextStore& store, const PlanBlueprint& blueprint);

/// Both runners use a MockPlanner over the effective cost model unless one is
/// supplied. The supplied planner's counter is not reset.
Trace run_context_aware(const Scenario& scenario, std::uint64_t seed, const RunOptions& options = {});
Trace run_context_aware(const Scenario& scenario, std::uint64_t seed, Planner& planner,
                        const RunOptions& options = {});
Trace run_traditional(const Scenario& scenario, std::uint64_t seed, const RunOptions& options = {});
Trace run_traditional(const Scenario& scenario, std::uint64_t seed, Planner& planner,
                      const RunOptions& options = {});

Trace run_mode(const Scenario& scenario, RunMode mode, std::uint64_t seed, const RunOptions& options = {});

}  // namespace camcp
