#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "camcp/condition.hpp"
#include "camcp/value.hpp"

namespace camcp {

enum class QueryKind { travel, wedding };

std::string_view to_string(QueryKind kind);
/// Throws UnsupportedKind.
QueryKind parse_query_kind(std::string_view text);

/// A user request handed to the planner.
///
/// travel requires params destination (text), days (integer >= 1) and budget
/// (number); wedding requires scenario (text reference to the scenario file).
struct Query {
    std::string raw_text;
    QueryKind kind = QueryKind::travel;
    Value params = Value::object();

    /// Throws SchemaError naming the first missing or ill-typed param.
    void validate() const;

    Value to_value() const;
    static Query from_value(const Value& v, const std::string& field = "query");

    friend bool operator==(const Query& a, const Query& b);
};

struct StageOutline {
    std::string stage_id;
    std::string server_id;
    Condition trigger = Condition::all_of({});
    std::string done_key;
    std::string output_key;

    friend bool operator==(const StageOutline&, const StageOutline&) = default;
};

/// The planner's seeded plan: goals, constraints and the stage outline with
/// its trigger wiring. goals[i] describes the goal met by stages[i].
struct PlanBlueprint {
    std::vector<std::string> goals;
    std::map<std::string, Value> constraints;
    std::vector<StageOutline> stages;
    std::string completion_key;

    /// Conjunction of every stage's done key being true.
    Condition completion_condition() const;

    /// Checks done-key uniqueness and that the trigger graph (edge from the
    /// stage producing a done key to every stage whose trigger reads it) is
    /// acyclic. Throws SchemaError.
    void validate() const;

    Value to_value() const;
    static PlanBlueprint from_value(const Value& v, const std::string& field = "blueprint");

    friend bool operator==(const PlanBlueprint& a, const PlanBlueprint& b);
};

namespace detail {

// Small typed accessors shared by the from_value parsers. Each throws
// SchemaError(field) on a missing or ill-typed member.
const Value& require(const Value& obj, const std::string& name, const std::string& field);
std::string require_text(const Value& obj, const std::string& name, const std::string& field);
const Value& require_object(const Value& obj, const std::string& name, const std::string& field);
const Value& require_list(const Value& obj, const std::string& name, const std::string& field);
std::string join_field(const std::string& parent, const std::string& name);
void reject_unknown(const Value& obj, std::initializer_list<std::string_view> known,
                    const std::string& field);

}  // namespace detail

}  // namespace camcp
