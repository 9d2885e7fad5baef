// Benchmark comparing the serial reference replicate runner against the
// OpenMP-parallel one on representative workloads. Also verifies that both
// paths produce bit-identical results.
#include <chrono>
#include <cstdio>
#include <vector>

#include "fitwave/experiments.hpp"
#include "fitwave/parallel.hpp"
#include "fitwave/rng.hpp"
#include "fitwave/yule.hpp"

using namespace fitwave;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class Fn>
double timed(Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return seconds_since(start);
}

} // namespace

int main() {
    const std::uint64_t seed = 20240901;

    std::printf("%-28s %10s %10s %8s %7s\n", "workload", "serial[s]", "openmp[s]", "speedup",
                "match");

    {
        Params params;
        params.n = 2000;
        params.mu = 1.0;
        params.q = 0.5;
        params.gamma = 1.0;
        const double t = 2.0;
        const std::size_t reps = 64;
        Estimate serial, parallel;
        const double ts = timed([&] { serial = estimate_rate(params, t, reps, seed, 1); });
        const double tp = timed([&] { parallel = estimate_rate(params, t, reps, seed, 0); });
        const bool match = serial.mean == parallel.mean && serial.se == parallel.se;
        std::printf("%-28s %10.3f %10.3f %8.2f %7s\n", "moran n=2000 t=2 reps=64", ts, tp, ts / tp,
                    match ? "yes" : "NO");
    }

    {
        const std::size_t reps = 4000;
        std::vector<std::int64_t> serial_out(reps), parallel_out(reps);
        auto run = [&](std::vector<std::int64_t>& out, int workers) {
            for_each_replicate(reps, workers, [&](std::size_t i) {
                Rng rng = replicate_rng(seed, i);
                out[i] = simulate_yule(2, 3, TypeLinearBranch{1.0}, 1.0, 1.5, kDefaultParticleCap,
                                       rng)
                             .max_offset;
            });
        };
        const double ts = timed([&] { run(serial_out, 1); });
        const double tp = timed([&] { run(parallel_out, 0); });
        const bool match = serial_out == parallel_out;
        std::printf("%-28s %10.3f %10.3f %8.2f %7s\n", "yule k=2 t=1.5 reps=4000", ts, tp, ts / tp,
                    match ? "yes" : "NO");
    }

    {
        const std::size_t reps = 200;
        Params params;
        params.n = 10000;
        WidthExperimentResult serial, parallel;
        const Scales scales = Scales::defaults(params.n);
        const double ts = timed([&] {
            serial = width_experiment(params, scales, InitProfile::TwoPointBalanced,
                                      scales.width_scale, reps, seed, 1);
        });
        const double tp = timed([&] {
            parallel = width_experiment(params, scales, InitProfile::TwoPointBalanced,
                                        scales.width_scale, reps, seed, 0);
        });
        const bool match = serial.collapse_within.mean == parallel.collapse_within.mean &&
                           serial.breach_union.mean == parallel.breach_union.mean;
        std::printf("%-28s %10.3f %10.3f %8.2f %7s\n", "width-exp n=1e4 reps=200", ts, tp, ts / tp,
                    match ? "yes" : "NO");
    }

    return 0;
}
