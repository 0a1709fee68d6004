#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "camcp/metrics.hpp"
#include "camcp/runtime.hpp"

namespace camcp {

struct BenchOptions {
    std::size_t n_seeds = 30;
    std::uint64_t first_seed = 0;
    RunOptions run;
};

struct BenchRow {
    RunMetrics metrics;
    double wall_clock_s = 0;
};

struct BenchReport {
    std::string scenario;
    std::size_t n_seeds = 0;
    /// Per seed, the traditional row then the context-aware row. Seeds with
    /// a failed run are absent and listed in `errors`.
    std::vector<BenchRow> rows;
    std::vector<std::string> errors;
};

/// Runs both modes for every seed, seeds spread over OpenMP threads.
BenchReport run_bench(const Scenario& scenario, const BenchOptions& options);
/// Serial reference for run_bench; identical rows up to wall-clock time.
BenchReport run_bench_serial(const Scenario& scenario, const BenchOptions& options);

inline constexpr const char* kRunsCsvHeader =
    "scenario,mode,seed,llm_calls,completeness,simulated_latency_s,wall_clock_s,makespan_min,coordination,goal_sat,"
    "constraint_sat";

void write_runs_csv(const BenchReport& report, std::ostream& out);

/// Per-mode means, paired statistics per metric and the mean per-seed
/// latency ratio. Cost diffs are traditional - context-aware; benefit diffs
/// are context-aware - traditional.
Value summarize(const BenchReport& report);

/// Writes runs.csv and summary.json into `out_dir`, creating it.
void write_bench_outputs(const BenchReport& report, const std::filesystem::path& out_dir);

std::string format_number(double x);

}  // namespace camcp
