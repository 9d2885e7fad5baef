#include "doctest.h"

#include <cmath>
#include <vector>

#include "fitwave/parallel.hpp"
#include "fitwave/rng.hpp"
#include "fitwave/stats.hpp"
#include "fitwave/yule.hpp"

using namespace fitwave;

namespace {

double poisson_tail(double lambda, int m) {
    // P(Po(lambda) >= m) via the complementary partial sum
    double term = std::exp(-lambda), cdf = 0.0;
    for (int i = 0; i < m; ++i) {
        cdf += term;
        term *= lambda / double(i + 1);
    }
    return 1.0 - cdf;
}

} // namespace

TEST_CASE("frozen types when the advance rate is zero") {
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        CHECK(simulate_yule(3, 4, ConstantBranch{2.0}, 0.0, 1.0, 100000, rng).max_offset == 0);
        CHECK(simulate_yule(1, 2, TypeLinearBranch{1.0}, 0.0, 0.5, 100000, rng).max_offset == 0);
    }
}

TEST_CASE("single-ancestor growth has mean e^t at unit branch rate") {
    const std::size_t reps = 10000;
    std::vector<double> pops(reps);
    for_each_replicate(reps, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(404, i);
        pops[i] = double(simulate_yule(0, 1, ConstantBranch{1.0}, 1.0, 1.0, 100000, rng).population);
    });
    const Estimate e = estimate_from(pops);
    CHECK(std::abs(e.mean - std::exp(1.0)) <= 3 * e.se);
}

TEST_CASE("pure type advance is a Poisson counting process") {
    const std::size_t reps = 10000;
    std::vector<double> offsets(reps);
    for_each_replicate(reps, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(405, i);
        offsets[i] =
            double(simulate_yule(0, 1, ConstantBranch{0.0}, 1.0, 2.0, 100000, rng).max_offset);
    });
    const Estimate e = estimate_from(offsets);
    CHECK(std::abs(e.mean - 2.0) <= 3 * e.se);
    std::size_t ge1 = 0;
    for (double m : offsets) ge1 += m >= 1;
    const Estimate p1 = binomial_estimate(ge1, reps);
    CHECK(std::abs(p1.mean - poisson_tail(2.0, 1)) <= 3 * p1.se);
}

TEST_CASE("population count never decreases and the cap errors out") {
    Rng rng(9);
    const auto r = simulate_yule(0, 5, ConstantBranch{1.0}, 1.0, 1.0, 100000, rng);
    CHECK(r.population >= 5);
    CHECK(r.max_offset >= 0);
    CHECK_THROWS_AS(simulate_yule(0, 5, ConstantBranch{5.0}, 1.0, 4.0, 50, rng), YuleCapError);
    try {
        Rng rng2(10);
        simulate_yule(0, 5, ConstantBranch{5.0}, 1.0, 4.0, 50, rng2);
    } catch (const YuleCapError& err) {
        CHECK(err.time_reached > 0.0);
        CHECK(err.time_reached < 4.0);
        CHECK(err.cap == 50);
    }
}

TEST_CASE("first-passage distribution matches closed forms without branching") {
    // Constant rate 0 keeps the population at n0; the max offset of n0
    // independent rate-mu advance chains has tail 1 - P(Po < m)^n0.
    for (std::uint64_t n0 : {1, 5}) {
        const double t = 1.25, mu = 0.8;
        const auto tail = max_offset_tail(0, n0, ConstantBranch{0.0}, mu, t);
        for (std::size_t m = 1; m < tail.size(); ++m) {
            const double single = poisson_tail(mu * t, (int)m);
            const double expected = 1.0 - std::pow(1.0 - single, double(n0));
            CHECK(tail[m] == doctest::Approx(expected).epsilon(1e-7));
        }
    }
}

TEST_CASE("first-passage distribution matches particle simulation") {
    const std::int64_t k = 1;
    const double g = 0.7, mu = 1.0, t = 0.6;
    const std::uint64_t n0 = 10;
    const auto tail = max_offset_tail(k, n0, TypeLinearBranch{g}, mu, t);
    const std::size_t reps = 8000;
    std::vector<std::int64_t> offsets(reps);
    for_each_replicate(reps, 0, [&](std::size_t i) {
        Rng rng = replicate_rng(42424, i);
        offsets[i] = simulate_yule(k, n0, TypeLinearBranch{g}, mu, t, 1000000, rng).max_offset;
    });
    for (int l = 1; l <= 4; ++l) {
        std::size_t hits = 0;
        for (auto m : offsets) hits += m >= l;
        const Estimate e = binomial_estimate(hits, reps);
        const double slack = 4 * std::max(e.se, 1e-4);
        CHECK(std::abs(e.mean - tail[l]) <= slack);
    }
}

TEST_CASE("constant-rate cap dominates the type-linear law below the ceiling") {
    // While every type stays at most k + l, type-linear particles branch
    // no faster than the constant rate gamma (k+l) + 1.
    const std::int64_t k = 1;
    const std::uint64_t l = 2;
    const double g = 0.5, mu = 1.0, t = 0.75;
    const std::uint64_t n0 = 3;
    const std::size_t reps = 10000;
    std::vector<char> linear_hits(reps), capped_hits(reps);
    for_each_replicate(reps, 0, [&](std::size_t i) {
        Rng a = replicate_rng(5151, i);
        Rng b = replicate_rng(6161, i);
        linear_hits[i] =
            simulate_yule(k, n0, TypeLinearBranch{g}, mu, t, 1000000, a).max_offset > (std::int64_t)l;
        const double cap_rate = g * double(k + (std::int64_t)l) + 1.0;
        capped_hits[i] =
            simulate_yule(k, n0, ConstantBranch{cap_rate}, mu, t, 1000000, b).max_offset >
            (std::int64_t)l;
    });
    std::size_t lin = 0, cap = 0;
    for (std::size_t i = 0; i < reps; ++i) {
        lin += linear_hits[i];
        cap += capped_hits[i];
    }
    const Estimate el = binomial_estimate(lin, reps);
    const Estimate ec = binomial_estimate(cap, reps);
    CHECK(el.mean <= ec.mean + 3 * pooled_se(el.se, ec.se));
}

TEST_CASE("restarted front accumulates i.i.d. block maxima") {
    Params params;
    params.n = 500;
    params.mu = 1.0;
    params.q = 0.5;
    params.gamma = 1.0;
    const Scales scales = Scales::defaults(500);

    Rng rng(31);
    const auto path = restarted_front(params, scales, 4.0 * scales.time_scale, rng);
    CHECK(path.front.size() == 5);
    CHECK(path.front[0] == 0);
    for (std::size_t i = 1; i < path.front.size(); ++i) CHECK(path.front[i] >= path.front[i - 1]);
    CHECK(path.block_length == doctest::Approx(scales.time_scale));

    // Distribution check: the two-block displacement equals the sum of two
    // independent one-block displacements.
    const auto tail = max_offset_tail(scales.width_scale, (std::uint64_t)params.n,
                                      TypeLinearBranch{params.gamma}, params.mu,
                                      scales.time_scale);
    const std::size_t reps = 10000;
    std::vector<double> two_block(reps), summed(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        Rng r1 = replicate_rng(808, i);
        two_block[i] = double(
            restarted_front(tail, scales.time_scale, 2.0 * scales.time_scale, r1).front.back());
        Rng r2 = replicate_rng(809, i);
        Rng r3 = replicate_rng(810, i);
        summed[i] =
            double(restarted_front(tail, scales.time_scale, scales.time_scale, r2).front.back()) +
            double(restarted_front(tail, scales.time_scale, scales.time_scale, r3).front.back());
    }
    const double d = ks_statistic(two_block, summed);
    CHECK(d < ks_critical(reps, reps, 0.01));
}
