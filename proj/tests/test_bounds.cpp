#include "doctest.h"

#include <cmath>

#include "fitwave/bounds.hpp"

using namespace fitwave;

namespace {

// Exact exponential series tail by forward summation; no cancellation.
double exact_series_tail(double x, unsigned k) {
    double term = 1.0;
    for (unsigned i = 1; i <= k; ++i) term *= x / double(i);
    double sum = 0.0, t = term;
    for (unsigned i = k;; ++i) {
        sum += t;
        if (t < sum * 1e-18 + 1e-300) break;
        t *= x / double(i + 1);
    }
    return sum;
}

} // namespace

TEST_CASE("exponential series tail bound closed forms") {
    CHECK(exp_series_tail_bound(1.0, 2).raw == doctest::Approx(std::exp(1.0) / 2).epsilon(1e-12));
    CHECK(std::exp(1.0) - 2.0 < exp_series_tail_bound(1.0, 2).raw); // true tail below
    CHECK(exp_series_tail_bound(0.0, 3).raw == 0.0);
    CHECK(exp_series_tail_bound(2.0, 0).raw == doctest::Approx(std::exp(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(exp_series_tail_bound(-1.0, 2), std::invalid_argument);
}

TEST_CASE("exponential series tail bound dominates the exact tail") {
    for (double x = 0.25; x <= 10.0; x += 0.25) {
        for (unsigned k = 0; k <= 30; ++k) {
            const double bound = exp_series_tail_bound(x, k).raw;
            const double tail = exact_series_tail(x, k);
            CHECK(tail <= bound * (1.0 + 1e-12) + 1e-300);
        }
    }
}

TEST_CASE("branching max-type bound closed forms") {
    // 2 * (1*1)^3 * e^{1} / 3! = e/3
    CHECK(yule_max_tail_bound(2, 1, 1, 1, 3).raw ==
          doctest::Approx(2 * std::exp(1.0) / 6).epsilon(1e-12));
    // l = 0 clamps to 1 as a probability
    CHECK(yule_max_tail_bound(2, 1, 1, 1, 0).raw >= 1.0);
    CHECK(yule_max_tail_bound(2, 1, 1, 1, 0).prob == 1.0);
    // type-linear: 0.5^4 e^{(1*(2+4)+1)*0.5} / 4!
    CHECK(type_linear_max_tail_bound(1, 0.5, 1, 1, 2, 4).raw ==
          doctest::Approx(0.0625 * std::exp(3.5) / 24).epsilon(1e-12));
    CHECK(type_linear_max_tail_bound(1, 0.5, 1, 1, 2, 0).prob == 1.0);
}

TEST_CASE("population drop and rise bounds") {
    CHECK(min_drop_tail_bound(10, 1, 1, 5).raw ==
          doctest::Approx(10 * std::exp(1.0) / 120).epsilon(1e-12));
    // t = 0 with l >= 1 kills the (t mu)^l factor
    CHECK(front_rise_tail_bound(10, 0.0, 1, 1, 0, 3).raw == 0.0);
    CHECK_THROWS_AS(front_rise_tail_bound(10, 1, 1, 1, 0, 0), std::invalid_argument);
    // 2 * 10 * (0.5)^2 * e^{(1*(2+4)+1+1)*0.5} / 1!
    CHECK(front_rise_tail_bound(10, 0.5, 1, 1, 2, 2).raw ==
          doctest::Approx(20 * 0.25 * std::exp(4.0)).epsilon(1e-12));
}

TEST_CASE("log-space evaluation agrees with direct arithmetic where it fits") {
    for (double n : {2.0, 50.0, 1e4}) {
        for (double t : {0.25, 1.0, 2.0}) {
            for (unsigned l = 0; l <= 12; ++l) {
                double fact = 1.0;
                for (unsigned i = 2; i <= l; ++i) fact *= i;
                const double direct = n * std::pow(t * 1.0, double(l)) * std::exp(t) / fact;
                if (!std::isfinite(direct)) continue;
                const double ours = min_drop_tail_bound(n, t, 1.0, l).raw;
                CHECK(ours == doctest::Approx(direct).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("bounds are monotone in time, size and mutation rate") {
    double prev = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const double v = yule_max_tail_bound(5, t, 1, 1, 4).raw;
        CHECK(v >= prev);
        prev = v;
    }
    prev = 0.0;
    for (double n : {2.0, 10.0, 100.0, 1e4}) {
        const double v = front_rise_tail_bound(n, 0.5, 1, 1, 0, 3).raw;
        CHECK(v >= prev);
        prev = v;
    }
    prev = 0.0;
    for (double mu : {0.1, 0.5, 1.0, 2.0}) {
        const double v = min_drop_tail_bound(10, 1, mu, 3).raw;
        CHECK(v >= prev);
        prev = v;
    }
    // decreasing in l once l exceeds t*mu*e
    const double tmu = 0.5;
    prev = HUGE_VAL;
    for (unsigned l = 2; l <= 20; ++l) {
        const double v = yule_max_tail_bound(5, tmu, 1, 1, l).raw;
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("width-contraction constants") {
    // hand-checked formula arithmetic at a small configuration
    Params p;
    p.n = 100;
    p.mu = 0.5;
    p.q = 0.5;
    p.gamma = 0.25;
    const Scales s = Scales::from(100, 1.0); // width_scale 3, l = 1
    REQUIRE(s.width_scale == 3);
    const auto c = contraction_constants(p, s, 2);
    const double t = s.time_scale;
    CHECK(c.k1 == doctest::Approx(2 * 100 * (t * 0.5) *
                                  std::exp((0.25 * (2 + 2) + 0.5 + 1) * t))
                      .epsilon(1e-12));
    CHECK(c.k2 == doctest::Approx(100 * (t * 0.5) * std::exp(t)).epsilon(1e-12));
    CHECK(c.p == doctest::Approx(1.0 - c.k1 - c.k2).epsilon(1e-12));
    CHECK(c.hold_probability >= 0.0);
    CHECK(c.hold_probability <= 1.0);
    CHECK_THROWS_AS(contraction_constants(p, s, 5), std::invalid_argument); // w0 > width_scale

    // In a regime where the constants are already small, the stability lower
    // bound climbs toward 1 along a growing size grid.
    Params weak;
    weak.n = 10000;
    weak.mu = 1e-3;
    weak.q = 0.5;
    weak.gamma = 1e-3;
    double prev = -HUGE_VAL;
    for (int n : {10000, 1000000, 100000000}) {
        weak.n = n;
        const Scales sc = Scales::defaults(n);
        const double p_lower = width_stability_lower(weak, sc, sc.width_scale);
        CHECK(p_lower > prev);
        prev = p_lower;
    }
    CHECK(prev > 0.999);
}

TEST_CASE("adaptation-rate envelope") {
    const double n = 1e4;
    const double lln = std::log(std::log(n));
    CHECK(rate_envelope(n, 2.0) == doctest::Approx(2.0 * std::log(n) / (lln * lln)).epsilon(1e-12));
}
