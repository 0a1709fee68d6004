// camcp: run one scenario, benchmark both modes, or recompute metrics
// from a saved trace.
//
// Exit codes: 0 success, 1 run error, 2 usage error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "camcp/bench.hpp"
#include "camcp/errors.hpp"
#include "camcp/metrics.hpp"
#include "camcp/runtime.hpp"
#include "camcp/scenario.hpp"

namespace fs = std::filesystem;

namespace {

// Accepts a path or a bundled scenario name such as "travel".
camcp::Scenario resolve_scenario(const std::string& arg)
{
    if (fs::exists(arg))
        return camcp::load_scenario(arg);
    const fs::path bundled = fs::path(CAMCP_SCENARIO_DIR) / (arg + ".scenario");
    if (fs::exists(bundled))
        return camcp::load_scenario(bundled);
    throw camcp::ScenarioParseError("no scenario file or bundled scenario named '" + arg + "'");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Context-aware tool orchestration runtime and benchmark"};
    app.require_subcommand(1);

    std::string scenario_arg;
    std::string mode_arg = "ca";
    std::uint64_t seed = 0;
    std::string trace_path;
    std::optional<int> window;
    bool parallel = false;

    auto* run = app.add_subcommand("run", "Run one scenario in one mode and print its metrics");
    run->add_option("--scenario", scenario_arg, "Scenario file or bundled name")->required();
    run->add_option("--mode", mode_arg, "ca or traditional")
        ->check(CLI::IsMember({"ca", "context_aware", "traditional"}));
    run->add_option("--seed", seed, "Query seed; 0 is the default query");
    run->add_option("--trace", trace_path, "Write the JSON-lines trace here ('-' for stdout)");
    run->add_option("--window", window, "Enable the baseline context window with this many entries")
        ->check(CLI::PositiveNumber);
    run->add_flag("--parallel", parallel, "Fire ready reactors concurrently");

    std::size_t n_seeds = 30;
    std::string out_dir = "bench_out";
    std::optional<double> per_call, per_tool;
    auto* bench = app.add_subcommand("bench", "Run both modes over seeds 0..n-1 and write runs.csv and summary.json");
    bench->add_option("--scenario", scenario_arg, "Scenario file or bundled name")->required();
    bench->add_option("--n", n_seeds, "Number of seeds")->check(CLI::PositiveNumber);
    bench->add_option("--out", out_dir, "Output directory");
    bench->add_option("--window", window, "Enable the baseline context window with this many entries")
        ->check(CLI::PositiveNumber);
    bench->add_option("--latency", per_call, "Simulated seconds per planner call")
        ->check(CLI::NonNegativeNumber);
    bench->add_option("--per-tool-latency", per_tool, "Simulated seconds per tool execution")
        ->check(CLI::NonNegativeNumber);

    auto* replay = app.add_subcommand("replay", "Recompute metrics from a saved trace");
    replay->add_option("--trace", trace_path, "JSON-lines trace file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        camcp::RunOptions options;
        if (window)
            options.window = camcp::WindowConfig{true, *window};
        options.parallel_reactors = parallel;

        if (*run) {
            const camcp::Scenario scenario = resolve_scenario(scenario_arg);
            const camcp::Trace trace = camcp::run_mode(scenario, camcp::parse_run_mode(mode_arg), seed, options);
            if (trace_path == "-") {
                trace.write(std::cout);
            } else if (!trace_path.empty()) {
                std::ofstream out(trace_path);
                if (!out)
                    throw camcp::Error("cannot write " + trace_path);
                trace.write(out);
            }
            // Metrics go to stderr when stdout carries the trace.
            std::ostream& report = trace_path == "-" ? std::cerr : std::cout;
            report << camcp::compute_metrics(trace, scenario).to_value().dump() << '\n';
        } else if (*bench) {
            const camcp::Scenario scenario = resolve_scenario(scenario_arg);
            camcp::CostModel cost = scenario.cost_model;
            if (per_call)
                cost.per_call_latency_s = *per_call;
            if (per_tool)
                cost.per_tool_latency_s = *per_tool;
            options.cost_model = cost;
            const camcp::BenchReport report = camcp::run_bench(scenario, {n_seeds, 0, options});
            camcp::write_bench_outputs(report, out_dir);
            std::cout << camcp::summarize(report).dump(2) << '\n';
            for (const auto& e : report.errors)
                std::cerr << "error: " << e << '\n';
            if (!report.errors.empty())
                return 1;
        } else if (*replay) {
            std::cout << camcp::replay(trace_path).to_value().dump() << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "camcp: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
