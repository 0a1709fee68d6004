#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include "camcp/checks.hpp"
#include "camcp/scenario.hpp"
#include "camcp/trace.hpp"

namespace camcp {

struct RunMetrics {
    std::string scenario;
    RunMode mode = RunMode::context_aware;
    std::uint64_t seed = 0;
    std::int64_t llm_calls = 0;
    std::int64_t tool_execs = 0;
    double completeness = 0;
    double simulated_latency_s = 0;
    /// Present when the run produced a transport schedule.
    std::optional<std::int64_t> makespan_min;
    std::optional<int> coordination;
    double goal_satisfaction = 0;
    double constraint_satisfaction = 0;

    Value to_value() const;
    friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

/// Recomputes every metric from the trace alone. Throws MalformedTrace if
/// the trace is inconsistent with itself.
RunMetrics compute_metrics(const Trace& trace);

/// Also throws MalformedTrace if the trace was not produced from `scenario`.
RunMetrics compute_metrics(const Trace& trace, const Scenario& scenario);

/// Reads a JSON-lines trace file and computes its metrics.
RunMetrics replay(const std::filesystem::path& path);

struct PairedStats {
    std::size_t n = 0;
    double mean_diff = 0;
    /// Sample standard deviation (n - 1 denominator).
    double sd = 0;
    /// Absent when sd is 0.
    std::optional<double> t_stat;

    Value to_value() const;
};

/// Throws InsufficientData if fewer than two diffs are given.
PairedStats paired_stats(std::span<const double> diffs);

}  // namespace camcp
