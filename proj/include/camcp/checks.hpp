#pragma once

#include <map>
#include <string>
#include <vector>

#include "camcp/plan_types.hpp"
#include "camcp/value.hpp"

namespace camcp {

struct CheckResult {
    std::string name;
    bool satisfied = true;
    std::string detail;
};

struct Satisfaction {
    /// Fraction of goal output keys present.
    double goal_satisfaction = 0;
    /// Fraction of constraint checks that hold. A check whose data is absent
    /// holds vacuously; missing outputs are counted by goal_satisfaction.
    double constraint_satisfaction = 1;
    std::vector<CheckResult> checks;
};

/// Checks for a run. `constraints` are the query params, `outputs` maps
/// output keys to stage outputs.
std::vector<CheckResult> check_constraints(QueryKind kind,
                                           const std::map<std::string, Value>& constraints,
                                           const std::map<std::string, Value>& outputs);

Satisfaction evaluate_satisfaction(QueryKind kind,
                                   const std::vector<std::string>& goal_keys,
                                   const std::map<std::string, Value>& constraints,
                                   const std::map<std::string, Value>& outputs);

}  // namespace camcp
