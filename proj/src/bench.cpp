#include "camcp/bench.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>

#include "camcp/errors.hpp"

namespace camcp {

namespace {

struct SeedResult {
    std::optional<BenchRow> traditional;
    std::optional<BenchRow> context_aware;
    std::string error;
};

SeedResult run_seed(const Scenario& scenario, std::uint64_t seed, const RunOptions& options)
{
    SeedResult result;
    for (RunMode mode : {RunMode::traditional, RunMode::context_aware}) {
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const Trace trace = run_mode(scenario, mode, seed, options);
            const auto t1 = std::chrono::steady_clock::now();
            BenchRow row{compute_metrics(trace, scenario), std::chrono::duration<double>(t1 - t0).count()};
            (mode == RunMode::traditional ? result.traditional : result.context_aware) = std::move(row);
        } catch (const std::exception& e) {
            result.error = "seed " + std::to_string(seed) + " " + std::string(to_string(mode)) + ": " + e.what();
            return result;
        }
    }
    return result;
}

BenchReport assemble(const Scenario& scenario, const BenchOptions& options, std::vector<SeedResult>& results)
{
    BenchReport report;
    report.scenario = scenario.name;
    report.n_seeds = options.n_seeds;
    for (auto& r : results) {
        if (!r.error.empty()) {
            report.errors.push_back(std::move(r.error));
            continue;
        }
        report.rows.push_back(std::move(*r.traditional));
        report.rows.push_back(std::move(*r.context_aware));
    }
    return report;
}

}  // namespace

std::string format_number(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

BenchReport run_bench(const Scenario& scenario, const BenchOptions& options)
{
    std::vector<SeedResult> results(options.n_seeds);
    const auto n = static_cast<std::int64_t>(options.n_seeds);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i)
        results[static_cast<std::size_t>(i)] =
            run_seed(scenario, options.first_seed + static_cast<std::uint64_t>(i), options.run);
    return assemble(scenario, options, results);
}

BenchReport run_bench_serial(const Scenario& scenario, const BenchOptions& options)
{
    std::vector<SeedResult> results;
    for (std::size_t i = 0; i < options.n_seeds; ++i)
        results.push_back(run_seed(scenario, options.first_seed + i, options.run));
    return assemble(scenario, options, results);
}

void write_runs_csv(const BenchReport& report, std::ostream& out)
{
    out << kRunsCsvHeader << '\n';
    for (const auto& row : report.rows) {
        const RunMetrics& m = row.metrics;
        out << m.scenario << ',' << to_string(m.mode) << ',' << m.seed << ',' << m.llm_calls << ','
            << format_number(m.completeness) << ',' << format_number(m.simulated_latency_s) << ','
            << format_number(row.wall_clock_s) << ',' << (m.makespan_min ? std::to_string(*m.makespan_min) : "")
            << ',' << (m.coordination ? std::to_string(*m.coordination) : "") << ','
            << format_number(m.goal_satisfaction) << ',' << format_number(m.constraint_satisfaction) << '\n';
    }
}

Value summarize(const BenchReport& report)
{
    std::vector<const RunMetrics*> trad, ca;
    for (const auto& row : report.rows)
        (row.metrics.mode == RunMode::traditional ? trad : ca).push_back(&row.metrics);

    struct Metric {
        const char* name;
        bool cost;
        std::optional<double> (*get)(const RunMetrics&);
    };
    const Metric metrics[] = {
        {"llm_calls", true, [](const RunMetrics& m) -> std::optional<double> { return static_cast<double>(m.llm_calls); }},
        {"simulated_latency_s", true, [](const RunMetrics& m) -> std::optional<double> { return m.simulated_latency_s; }},
        {"makespan_min", true,
         [](const RunMetrics& m) -> std::optional<double> {
             if (!m.makespan_min)
                 return std::nullopt;
             return static_cast<double>(*m.makespan_min);
         }},
        {"completeness", false, [](const RunMetrics& m) -> std::optional<double> { return m.completeness; }},
        {"coordination", false,
         [](const RunMetrics& m) -> std::optional<double> {
             if (!m.coordination)
                 return std::nullopt;
             return static_cast<double>(*m.coordination);
         }},
        {"goal_satisfaction", false, [](const RunMetrics& m) -> std::optional<double> { return m.goal_satisfaction; }},
        {"constraint_satisfaction", false,
         [](const RunMetrics& m) -> std::optional<double> { return m.constraint_satisfaction; }},
    };

    Value means = Value::object();
    Value paired = Value::object();
    for (const Metric& metric : metrics) {
        std::vector<double> diffs;
        double sum_t = 0, sum_c = 0;
        for (std::size_t i = 0; i < trad.size(); ++i) {
            const auto t = metric.get(*trad[i]);
            const auto c = metric.get(*ca[i]);
            if (!t || !c)
                continue;
            sum_t += *t;
            sum_c += *c;
            diffs.push_back(metric.cost ? *t - *c : *c - *t);
        }
        if (diffs.empty())
            continue;
        const double k = static_cast<double>(diffs.size());
        means["traditional"][metric.name] = sum_t / k;
        means["context_aware"][metric.name] = sum_c / k;
        Value entry{{"orientation", metric.cost ? "traditional_minus_context_aware" : "context_aware_minus_traditional"}};
        try {
            entry.update(paired_stats(diffs).to_value());
        } catch (const InsufficientData& e) {
            entry["error"] = e.what();
        }
        paired[metric.name] = std::move(entry);
    }

    double ratio_sum = 0;
    std::size_t ratio_n = 0;
    for (std::size_t i = 0; i < trad.size(); ++i)
        if (trad[i]->simulated_latency_s > 0) {
            ratio_sum += ca[i]->simulated_latency_s / trad[i]->simulated_latency_s;
            ++ratio_n;
        }

    Value errors = Value::array();
    for (const auto& e : report.errors)
        errors.push_back(e);
    return Value{{"scenario", report.scenario},
                 {"n_seeds", report.n_seeds},
                 {"seeds_ok", trad.size()},
                 {"errors", std::move(errors)},
                 {"means", std::move(means)},
                 {"paired", std::move(paired)},
                 {"latency_ratio_context_aware_over_traditional",
                  ratio_n ? Value(ratio_sum / static_cast<double>(ratio_n)) : Value()}};
}

void write_bench_outputs(const BenchReport& report, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir / "runs.csv");
    if (!csv)
        throw Error("cannot write " + (out_dir / "runs.csv").string());
    write_runs_csv(report, csv);
    std::ofstream json(out_dir / "summary.json");
    if (!json)
        throw Error("cannot write " + (out_dir / "summary.json").string());
    json << summarize(report).dump(2) << '\n';
}

}  // namespace camcp
