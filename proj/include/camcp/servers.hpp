#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "camcp/catalog.hpp"
#include "camcp/reactor.hpp"
#include "camcp/scenario.hpp"
#include "camcp/schedule.hpp"
#include "camcp/trace.hpp"

namespace camcp {

/// Named inputs handed to a stage: constraint names, upstream output keys
/// and, in context-aware mode, entries under the stage's input prefixes.
using StageInputs = std::map<std::string, Value>;

struct StageOutcome {
    Value output;
    std::optional<std::string> failure;
    /// One entry per tool invocation the stage made.
    std::vector<Value> invocations;
    /// Extra entries a reactive server posts besides its output.
    std::vector<Write> publications;
};

using StageCompute = std::function<StageOutcome(const StageInputs&)>;

/// A stage as the baseline orchestrator sees it: no trigger, no store.
struct StatelessTool {
    StageTemplate stage;
    StageCompute compute;

    ToolDeclaration declaration() const { return {stage.server_id, {stage.tool}}; }
};

/// Stage computations over a scenario's data tables. `batched` selects the
/// transport behaviour: shared trips (reactive) or one trip per request
/// (per-request dispatch by the baseline).
StageCompute stage_compute(const Scenario& scenario, const StageTemplate& stage, bool batched);

/// Collects a stage's inputs from a snapshot. Returns the first missing
/// required key instead when one is absent.
std::variant<StageInputs, std::string> gather_inputs(const StageTemplate& stage, const Snapshot& snapshot);

std::vector<ServerSpec> build_reactive_servers(const Scenario& scenario);
std::vector<StatelessTool> build_stateless_tools(const Scenario& scenario);

using ServerSet = std::variant<std::vector<ServerSpec>, std::vector<StatelessTool>>;
ServerSet build_servers(const Scenario& scenario, RunMode mode);

/// Requests gathered from tracker outputs or posted transport_request.* entries.
std::vector<TransportRequest> collect_requests(const StageInputs& inputs);

}  // namespace camcp
