// Serial reference vs OpenMP: the seed sweep and a wide reactor fan-out.
// Usage: camcp_bench_parallel [n_seeds] [fan_out]

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "camcp/bench.hpp"
#include "camcp/reactor.hpp"
#include "camcp/scenario.hpp"

using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

bool same_rows(const camcp::BenchReport& a, const camcp::BenchReport& b)
{
    if (a.rows.size() != b.rows.size())
        return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        if (!(a.rows[i].metrics == b.rows[i].metrics))
            return false;
    return true;
}

// Fan-out of `width` reactors on one seed key, each burning some CPU.
double fan_out(int width, bool parallel)
{
    camcp::ContextStore store;
    camcp::ReactorEngine engine(store);
    for (int i = 0; i < width; ++i) {
        const std::string id = "worker" + std::to_string(i);
        engine.register_server({id, {}, camcp::Condition::exists("go"),
                                [i](const camcp::Snapshot&) {
                                    double acc = 0;
                                    for (int k = 1; k < 200000; ++k)
                                        acc += std::sin(k * 1e-3 + i);
                                    return camcp::ActionResult::success({{"out" + std::to_string(i), acc}},
                                                                        "done" + std::to_string(i));
                                },
                                "done" + std::to_string(i), id});
    }
    store.put("go", true, "bench");
    const auto t0 = clock_type::now();
    engine.run_until_quiescent(4, parallel);
    return seconds_since(t0);
}

}  // namespace

int main(int argc, char** argv)
{
    const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 200;
    const int width = argc > 2 ? std::atoi(argv[2]) : 32;
    std::printf("threads: %d\n", omp_get_max_threads());

    for (const char* name : {"travel", "wedding_p5"}) {
        const camcp::Scenario sc = camcp::load_scenario(std::string(CAMCP_SCENARIO_DIR) + "/" + name + ".scenario");
        const camcp::BenchOptions opts{n, 0, {}};
        auto t0 = clock_type::now();
        const auto serial = camcp::run_bench_serial(sc, opts);
        const double ts = seconds_since(t0);
        t0 = clock_type::now();
        const auto par = camcp::run_bench(sc, opts);
        const double tp = seconds_since(t0);
        std::printf("%-11s seeds=%zu serial=%.4fs openmp=%.4fs speedup=%.2fx rows_match=%s\n", name, n, ts, tp,
                    ts / tp, same_rows(serial, par) ? "yes" : "NO");
    }

    const double ts = fan_out(width, false);
    const double tp = fan_out(width, true);
    std::printf("fan-out     width=%d serial=%.4fs openmp=%.4fs speedup=%.2fx\n", width, ts, tp, ts / tp);
    return 0;
}
