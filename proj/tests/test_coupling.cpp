#include "doctest.h"

#include <vector>

#include "fitwave/bounds.hpp"
#include "fitwave/coupling.hpp"
#include "fitwave/moran.hpp"
#include "fitwave/parallel.hpp"
#include "fitwave/rng.hpp"
#include "fitwave/stats.hpp"
#include "fitwave/yule.hpp"

using namespace fitwave;

namespace {

Params make_params(int n, double mu, double q, double gamma) {
    Params p;
    p.n = n;
    p.mu = mu;
    p.q = q;
    p.gamma = gamma;
    return p;
}

} // namespace

TEST_CASE("mutation-free degenerate coupling") {
    // With a vanishing mutation rate nothing ever drops or rises, so both
    // sup statistics stay at zero while the branching side only grows.
    const auto params = make_params(6, 1e-12, 0.5, 1.0);
    Rng rng(1);
    const auto r = couple_min_drop(params, Population::constant(6, 0), 1.0, rng);
    CHECK(r.process_stat == 0);
    CHECK(r.branching_stat >= 0);
    CHECK(r.dominance_violations == 0);

    Rng rng2(2);
    const auto f = couple_front_rise(params, Population::constant(6, 0), 2, 1.0, rng2);
    CHECK(f.process_stat == 0);
    CHECK(f.dominance_violations == 0);
    CHECK(f.welldef_violations == 0);
    CHECK_FALSE(f.stop_time.has_value());
}

TEST_CASE("min-drop coupling dominates pathwise with zero violations") {
    const auto params = make_params(10, 1.0, 0.5, 1.0);
    std::uint64_t violations = 0;
    const std::size_t runs = 300;
    std::vector<CouplingReport> reports(runs);
    for_each_replicate(runs, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(314, i);
        reports[i] = couple_min_drop(params, Population::constant(10, 0), 2.0, rng);
    });
    for (const auto& r : reports) {
        violations += r.dominance_violations;
        CHECK(r.process_stat <= r.branching_stat);
    }
    CHECK(violations == 0);
}

TEST_CASE("front-rise coupling holds both inequalities until the stop rule") {
    const auto params = make_params(10, 1.0, 0.5, 1.0);
    std::uint64_t dom = 0, wd = 0;
    const std::size_t runs = 200;
    std::vector<CouplingReport> reports(runs);
    for_each_replicate(runs, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(315, i);
        reports[i] = couple_front_rise(params, Population::constant(10, 0), 3, 1.5, rng);
    });
    for (const auto& r : reports) {
        dom += r.dominance_violations;
        wd += r.welldef_violations;
        CHECK(r.process_stat <= r.branching_stat);
        if (r.stop_time) CHECK(*r.stop_time <= 1.5);
    }
    CHECK(dom == 0);
    CHECK(wd == 0);
}

TEST_CASE("tracked-set coupling bounds the member drops") {
    const auto params = make_params(10, 1.0, 0.5, 1.0);
    std::uint64_t dom = 0, wd = 0;
    const std::size_t runs = 200;
    std::vector<CouplingReport> reports(runs);
    for_each_replicate(runs, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(316, i);
        reports[i] = couple_tracked_set(params, Population::constant(10, 0), -1, 3, 1.0, rng);
    });
    for (const auto& r : reports) {
        dom += r.dominance_violations;
        wd += r.welldef_violations;
    }
    CHECK(dom == 0);
    CHECK(wd == 0);
}

TEST_CASE("empty tracked set never violates anything") {
    // Threshold above every fitness value the run can reach from a flat
    // start within the horizon keeps the set empty throughout.
    const auto params = make_params(8, 1e-12, 0.5, 1.0);
    Rng rng(4);
    const auto r = couple_tracked_set(params, Population::constant(8, 0), 50, 2, 1.0, rng);
    CHECK(r.tracked_stat == std::numeric_limits<std::int64_t>::min());
    CHECK(r.dominance_violations == 0);
}

TEST_CASE("coupling preserves the population marginal law") {
    const auto params = make_params(15, 1.0, 0.5, 1.0);
    const double t = 1.0;
    const std::size_t reps = 4000;
    std::vector<double> coupled_mean(reps), coupled_width(reps);
    std::vector<double> plain_mean(reps), plain_width(reps);
    for_each_replicate(reps, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(500, i);
        const auto r = couple_min_drop(params, Population::constant(15, 0), t, rng);
        coupled_mean[i] = r.pop_mean_fitness;
        coupled_width[i] = double(r.pop_width);
        Rng rng2 = replicate_rng(501, i);
        Population pop = Population::constant(15, 0);
        simulate(params, pop, t, rng2, [](const Event&, const StepInfo&, const Population&) {});
        plain_mean[i] = pop.mean_fitness();
        plain_width[i] = double(pop.width());
    });
    CHECK(ks_statistic(coupled_mean, plain_mean) < ks_critical(reps, reps, 0.01));
    CHECK(ks_statistic(coupled_width, plain_width) < ks_critical(reps, reps, 0.01));

    // same check against the front-rise driver, which keeps the population
    // running past its stop rule
    std::vector<double> fr_mean(reps), fr_width(reps);
    for_each_replicate(reps, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(502, i);
        const auto r =
            couple_front_rise(params, Population::constant(15, 0), 3, 0.75, rng);
        fr_mean[i] = r.pop_mean_fitness;
        fr_width[i] = double(r.pop_width);
    });
    std::vector<double> plain2_mean(reps), plain2_width(reps);
    for_each_replicate(reps, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(503, i);
        Population pop = Population::constant(15, 0);
        simulate(params, pop, 0.75, rng, [](const Event&, const StepInfo&, const Population&) {});
        plain2_mean[i] = pop.mean_fitness();
        plain2_width[i] = double(pop.width());
    });
    CHECK(ks_statistic(fr_mean, plain2_mean) < ks_critical(reps, reps, 0.01));
    CHECK(ks_statistic(fr_width, plain2_width) < ks_critical(reps, reps, 0.01));
}

TEST_CASE("coupling preserves the branching marginal law") {
    const auto params = make_params(12, 1.0, 0.5, 1.0);
    const double t = 1.5;
    const std::size_t reps = 4000;
    std::vector<double> coupled_offset(reps), coupled_count(reps);
    std::vector<double> plain_offset(reps), plain_count(reps);
    for_each_replicate(reps, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(600, i);
        const auto r = couple_min_drop(params, Population::constant(12, 0), t, rng);
        coupled_offset[i] = double(r.branching_stat);
        coupled_count[i] = double(r.particle_count);
        Rng rng2 = replicate_rng(601, i);
        const auto y = simulate_yule(0, 12, ConstantBranch{1.0}, params.mu, t, 1000000, rng2);
        plain_offset[i] = double(y.max_offset);
        plain_count[i] = double(y.population);
    });
    CHECK(ks_statistic(coupled_offset, plain_offset) < ks_critical(reps, reps, 0.01));
    CHECK(ks_statistic(coupled_count, plain_count) < ks_critical(reps, reps, 0.01));
}

TEST_CASE("coupled min-drop tails stay under the closed-form bound") {
    const auto params = make_params(10, 1.0, 0.5, 1.0);
    const std::size_t reps = 3000;
    for (double t : {0.5, 1.0}) {
        std::vector<std::int64_t> drops(reps);
        for_each_replicate(reps, 0, [&](std::size_t i) {
            Rng rng = replicate_rng(700 + (std::uint64_t)(10 * t), i);
            drops[i] = couple_min_drop(params, Population::constant(10, 0), t, rng).process_stat;
        });
        for (std::uint64_t l : {1, 2, 3}) {
            std::size_t hits = 0;
            for (auto d : drops) hits += d >= (std::int64_t)l;
            const Estimate e = binomial_estimate(hits, reps);
            const double bound = min_drop_tail_bound(10, t, params.mu, l).prob;
            CHECK(e.mean <= bound + 3 * e.se);
        }
    }
}
