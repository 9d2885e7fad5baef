#include "doctest.h"

#include <cmath>
#include <map>

#include "fitwave/moran.hpp"
#include "fitwave/recorder.hpp"
#include "fitwave/rng.hpp"

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

TEST_CASE("total_rates on hand-enumerated configurations") {
    // equal fitnesses force zero selection
    {
        auto pop = Population::constant(3, 0);
        auto r = total_rates(pop, make_params(3, 1.0, 0.5, 1.0));
        CHECK(r.mutation == doctest::Approx(3.0));
        CHECK(r.resampling == doctest::Approx(2.0));
        CHECK(r.selection == doctest::Approx(0.0));
        CHECK(r.total == doctest::Approx(5.0));
    }
    // direct enumeration of ordered pairs: (3/3) * (1*2*1) = 2
    {
        auto pop = Population::from_fitness({0, 0, 1});
        auto r = total_rates(pop, make_params(3, 1.0, 0.5, 3.0));
        CHECK(r.selection == doctest::Approx(2.0));
        CHECK(r.total == doctest::Approx(3.0 + 2.0 + 2.0));
    }
    // single pair, gap 3: (1/2) * 3
    {
        auto pop = Population::from_fitness({-1, 2});
        auto r = total_rates(pop, make_params(2, 1.0, 0.5, 1.0));
        CHECK(r.selection == doctest::Approx(1.5));
    }
}

TEST_CASE("sample_event kind frequencies match the rate breakdown") {
    // fitnesses (0,1), mu=1, q=1/2, gamma=2: mutation 2, resampling 1,
    // selection (2/2)*1 = 1, so P(select) = selection/total = 1/4.
    auto pop = Population::from_fitness({0, 1});
    const auto params = make_params(2, 1.0, 0.5, 2.0);
    const auto rates = total_rates(pop, params);
    const double expected = rates.selection / rates.total;

    Rng rng(2024);
    const int reps = 100000;
    int selects = 0;
    for (int i = 0; i < reps; ++i) {
        const Event ev = sample_event(pop, params, rng);
        selects += ev.kind == Event::Kind::Select;
        if (ev.kind == Event::Kind::Select) {
            CHECK(ev.actor == 1);
            CHECK(ev.target == 0);
        }
    }
    const double freq = double(selects) / reps;
    const double se = std::sqrt(expected * (1 - expected) / reps);
    CHECK(std::abs(freq - expected) <= 3 * se);
}

TEST_CASE("sample_event degenerate kinds") {
    Rng rng(7);
    // all-equal population: never a selection event
    auto pop = Population::constant(4, 2);
    const auto params = make_params(4, 1.0, 0.5, 5.0);
    for (int i = 0; i < 2000; ++i) CHECK(sample_event(pop, params, rng).kind != Event::Kind::Select);
    // q = 1: never a deleterious mutation
    const auto params_q1 = make_params(4, 1.0, 1.0, 1.0);
    for (int i = 0; i < 2000; ++i)
        CHECK(sample_event(pop, params_q1, rng).kind != Event::Kind::MutDown);
}

TEST_CASE("apply_event updates fitness, histogram and clock") {
    auto pop = Population::from_fitness({0, 0, 1});
    Event up{Event::Kind::MutUp, 2, -1, 0.25};
    apply_event(pop, up);
    CHECK(pop.fitness(2) == 2);
    CHECK(pop.time() == 0.25);
    CHECK(pop.consistent());

    Event sel{Event::Kind::Select, 2, 0, 0.5};
    apply_event(pop, sel);
    CHECK(pop.fitness(0) == 2);
    CHECK(pop.fitness(1) == 0);
    CHECK(pop.consistent());

    // histogram transition {5:1} -> {4:1} for the mutated individual
    auto solo = Population::from_fitness({5, 5});
    Event down{Event::Kind::MutDown, 0, -1, 0.1};
    apply_event(solo, down);
    CHECK(solo.classes().at(4).size() == 1);
    CHECK(solo.classes().at(5).size() == 1);

    // a select event against a nonpositive gap signals a sampling bug
    auto flat = Population::constant(2, 3);
    Event bad{Event::Kind::Select, 0, 1, 0.1};
    CHECK_THROWS_AS(apply_event(flat, bad), std::logic_error);
}

TEST_CASE("pathwise invariants along a simulated trajectory") {
    const auto params = make_params(30, 1.0, 0.4, 1.5);
    Rng rng(99);
    Population pop = Population::from_fitness([] {
        std::vector<std::int64_t> f(30);
        for (int i = 0; i < 30; ++i) f[i] = i % 5;
        return f;
    }());

    std::int64_t prev_min = pop.min_fitness();
    std::int64_t prev_width = pop.width();
    double prev_xbar = pop.mean_fitness();
    int checked = 0;
    simulate(params, pop, 3.0, rng, [&](const Event& ev, const StepInfo&, const Population& p) {
        // min fitness only drops through deleterious mutations
        if (ev.kind != Event::Kind::MutDown) CHECK(p.min_fitness() >= prev_min);
        // width moves by at most one per mutation, never grows on replacement
        if (ev.kind == Event::Kind::MutUp || ev.kind == Event::Kind::MutDown)
            CHECK(std::abs(p.width() - prev_width) <= 1);
        else
            CHECK(p.width() <= prev_width);
        // selection strictly increases the mean
        if (ev.kind == Event::Kind::Select) CHECK(p.mean_fitness() > prev_xbar);
        if (++checked % 64 == 0) CHECK(p.consistent());
        prev_min = p.min_fitness();
        prev_width = p.width();
        prev_xbar = p.mean_fitness();
    });
    CHECK(checked > 100);
    CHECK(pop.consistent());
}

TEST_CASE("run_trajectory with t_end = 0 holds the initial snapshot") {
    Rng rng(1);
    const auto traj = run_trajectory(make_params(5, 1.0, 0.5, 1.0), Population::constant(5, 0), 0.0,
                                     RecorderSpec{}, rng);
    CHECK(traj.rows.size() == 1);
    CHECK(traj.rows.front().t == 0.0);
    CHECK(traj.event_count == 0);
}

TEST_CASE("identical seeds reproduce the trajectory bit for bit") {
    const auto params = make_params(12, 1.0, 0.3, 0.7);
    const auto initial = Population::from_fitness({0, 0, 1, 1, 2, 0, 0, 1, 3, 0, 2, 1});
    RecorderSpec spec;
    Rng a(555), b(555), c(556);
    const auto ta = run_trajectory(params, initial, 2.0, spec, a);
    const auto tb = run_trajectory(params, initial, 2.0, spec, b);
    const auto tc = run_trajectory(params, initial, 2.0, spec, c);
    REQUIRE(ta.rows.size() == tb.rows.size());
    for (std::size_t i = 0; i < ta.rows.size(); ++i) {
        CHECK(ta.rows[i].t == tb.rows[i].t);
        CHECK(ta.rows[i].xbar == tb.rows[i].xbar);
        CHECK(ta.rows[i].xmax == tb.rows[i].xmax);
        CHECK(ta.rows[i].xmin == tb.rows[i].xmin);
    }
    CHECK(ta.rows.size() != tc.rows.size()); // different stream, different path
}

TEST_CASE("neutral drift identity at small scale") {
    // gamma = 0: E[xbar_t] = mu (2q-1) t exactly.
    const double t = 1.0;
    const std::size_t reps = 4000;
    for (double q : {0.5, 1.0}) {
        const auto params = make_params(20, 1.0, q, 0.0);
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < reps; ++i) {
            Rng rng = replicate_rng(31337, i);
            Population pop = Population::constant(20, 0);
            simulate(params, pop, t, rng, [](const Event&, const StepInfo&, const Population&) {});
            sum += pop.mean_fitness();
            sumsq += pop.mean_fitness() * pop.mean_fitness();
        }
        const double mean = sum / reps;
        const double sd = std::sqrt((sumsq - sum * sum / reps) / (reps - 1));
        const double se = sd / std::sqrt(double(reps));
        const double target = (2 * q - 1) * t;
        CHECK(std::abs(mean - target) <= 3 * se + 1e-12);
    }
}

TEST_CASE("event cap aborts runaway configurations") {
    const auto params = make_params(50, 1.0, 0.5, 1.0);
    Rng rng(4);
    Population pop = Population::constant(50, 0);
    RecorderSpec spec;
    spec.max_events = 10;
    CHECK_THROWS_AS(run_trajectory(params, pop, 100.0, spec, rng), EventCapError);
}

TEST_CASE("parameter validation rejects out-of-range models") {
    CHECK_THROWS_AS(make_params(1, 1.0, 0.5, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_params(5, 0.0, 0.5, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_params(5, 1.0, 0.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_params(5, 1.0, 1.5, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(make_params(5, 1.0, 0.5, -1.0).validate(), std::invalid_argument);
    CHECK_NOTHROW(make_params(5, 1.0, 0.5, 0.0).validate());
    CHECK_NOTHROW(make_params(2, 0.1, 1.0, 2.0).validate());
}

TEST_CASE("scale derivation") {
    const Scales s = Scales::from(10000, std::sqrt(std::log(std::log(10000.0))));
    CHECK(s.width_scale == 6);
    CHECK(s.time_scale == doctest::Approx(1.8189).epsilon(1e-3));
    CHECK_THROWS_AS(Scales::from(8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Scales::from(100, 0.0), std::invalid_argument);
}
