#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "camcp/condition.hpp"
#include "camcp/plan_types.hpp"
#include "camcp/protocol.hpp"

namespace camcp {

/// Key the seeding step sets once goals and constraints are in the store.
inline constexpr std::string_view kSeedFlag = "goals_seeded";
/// Prefix under which seeded constraints are stored.
inline constexpr std::string_view kConstraintPrefix = "constraints.";
/// Prefix for transport requests posted by the wedding trackers.
inline constexpr std::string_view kTransportRequestPrefix = "transport_request.";

std::string constraint_key(std::string_view name);

/// Structural description of one pipeline stage, shared by the planner's
/// blueprint template, the reactor wiring and the stateless baseline tools.
struct StageTemplate {
    std::string stage_id;
    std::string server_id;
    std::string goal;
    std::string done_key;
    std::string output_key;
    Condition trigger;
    /// Constraint names the stage cannot run without.
    std::vector<std::string> required_constraints;
    /// Constraint names used when present.
    std::vector<std::string> optional_constraints;
    /// Output keys of upstream stages the stage cannot run without.
    std::vector<std::string> required_inputs;
    /// Store key prefixes whose entries are handed to the stage in
    /// context-aware mode.
    std::vector<std::string> input_prefixes;
    ToolInfo tool;
};

const std::vector<StageTemplate>& stage_catalog(QueryKind kind);
std::string completion_key_for(QueryKind kind);

}  // namespace camcp
