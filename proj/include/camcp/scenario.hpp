#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "camcp/catalog.hpp"
#include "camcp/plan_types.hpp"
#include "camcp/planner.hpp"
#include "camcp/value.hpp"

namespace camcp {

enum class TraditionalCalls { per_stage_plus_synthesis, single_orchestration_plus_synthesis };
enum class ContextAwareCalls { plan_and_summarize, combined_single };

std::string_view to_string(TraditionalCalls policy);
std::string_view to_string(ContextAwareCalls policy);

/// How many planner calls each mode makes. Fixed per scenario.
struct CallPolicy {
    TraditionalCalls traditional_calls = TraditionalCalls::per_stage_plus_synthesis;
    ContextAwareCalls ca_calls = ContextAwareCalls::plan_and_summarize;
};

/// Bounded history of the baseline orchestrator. Only FIFO eviction exists.
struct WindowConfig {
    bool enabled = false;
    int budget_entries = 3;
};

/// Declarative benchmark: data tables, constraints, call policy and the
/// default query. Immutable after load.
struct Scenario {
    std::string name;
    QueryKind kind = QueryKind::travel;
    CallPolicy call_policy;
    WindowConfig window;
    CostModel cost_model;
    std::string query_text;
    /// Default query params (travel) or planning constraints (wedding).
    std::map<std::string, Value> constraints;
    /// Travel only: lists seeds > 0 draw query variations from.
    Value variations = Value::object();
    Value data_tables = Value::object();

    /// Stage templates of this scenario's kind.
    const std::vector<StageTemplate>& stages() const { return stage_catalog(kind); }

    /// Seed 0 is the default query; other seeds derive a deterministic
    /// variation (travel) or the same query (wedding).
    Query make_query(std::uint64_t seed) const;
};

/// Parses and validates a scenario document. Throws ScenarioValidationError
/// naming the field.
Scenario parse_scenario(const Value& doc);

/// Throws ScenarioParseError for unreadable or non-JSON files.
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace camcp
