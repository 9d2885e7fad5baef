#include "fitwave/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fitwave/bounds.hpp"
#include "fitwave/coupling.hpp"
#include "fitwave/excursions.hpp"
#include "fitwave/labels.hpp"
#include "fitwave/moran.hpp"
#include "fitwave/parallel.hpp"
#include "fitwave/rng.hpp"
#include "fitwave/tracked_set.hpp"
#include "fitwave/yule.hpp"

namespace fitwave {

InitProfile profile_from_name(const std::string& name) {
    if (name == "all_zero") return InitProfile::AllZero;
    if (name == "two_point_balanced") return InitProfile::TwoPointBalanced;
    if (name == "two_point_extreme") return InitProfile::TwoPointExtreme;
    if (name == "ladder") return InitProfile::Ladder;
    throw std::invalid_argument("unknown initial profile: " + name);
}

std::string profile_name(InitProfile profile) {
    switch (profile) {
    case InitProfile::AllZero: return "all_zero";
    case InitProfile::TwoPointBalanced: return "two_point_balanced";
    case InitProfile::TwoPointExtreme: return "two_point_extreme";
    case InitProfile::Ladder: return "ladder";
    }
    return "?";
}

Population build_profile(InitProfile profile, int n, std::int64_t w0) {
    if (profile != InitProfile::AllZero && w0 < 1)
        throw std::invalid_argument("profile requires w0 >= 1");
    std::vector<std::int64_t> fitness(n, 0);
    switch (profile) {
    case InitProfile::AllZero:
        break;
    case InitProfile::TwoPointBalanced:
        for (int i = (n + 1) / 2; i < n; ++i) fitness[i] = w0;
        break;
    case InitProfile::TwoPointExtreme:
        fitness[n - 1] = w0;
        break;
    case InitProfile::Ladder:
        for (int i = 0; i < n; ++i) fitness[i] = (std::int64_t)i * w0 / (n - 1);
        break;
    }
    return Population::from_fitness(std::move(fitness));
}

double theorem_time(int n, const Scales& scales) {
    return std::max(std::log(std::log(double(n))), 5.0 * scales.time_scale);
}

Estimate estimate_rate(const Params& params, double t, std::size_t reps, std::uint64_t seed,
                       int workers) {
    params.validate();
    if (!(t > 0)) throw std::invalid_argument("estimate_rate: t must be > 0");
    std::vector<double> values(reps);
    for_each_replicate(reps, workers, [&](std::size_t i) {
        Rng rng = replicate_rng(seed, i);
        Population pop = Population::constant(params.n, 0);
        simulate(params, pop, t, rng, [](const Event&, const StepInfo&, const Population&) {});
        values[i] = pop.mean_fitness() / t;
    });
    return estimate_from(values);
}

SweepResult rate_sweep(const std::vector<int>& n_grid, const Params& base, std::size_t reps,
                       std::uint64_t seed, int workers) {
    if (n_grid.empty()) throw std::invalid_argument("rate_sweep: empty grid");
    SweepResult out;
    std::uint64_t stream = 0;
    for (int n : n_grid) {
        Params params = base;
        params.n = n;
        const Scales scales = Scales::defaults(n);
        SweepRow row;
        row.n = n;
        row.t = theorem_time(n, scales);
        row.rate = estimate_rate(params, row.t, reps, splitmix64(seed) + stream, workers);
        row.envelope = rate_envelope(double(n), 1.0);
        row.ratio = row.rate.mean / row.envelope;
        out.rows.push_back(row);
        ++stream;
    }

    double num = 0.0, den = 0.0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& row : out.rows) {
        num += row.rate.mean * row.envelope;
        den += row.envelope * row.envelope;
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
    }
    out.fitted_c = num / den;
    out.ratio_spread = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
    out.ratio_bounded = out.ratio_spread < 4.0;
    for (std::size_t i = 0; i + 1 < out.rows.size(); ++i) {
        const auto& a = out.rows[i].rate;
        const auto& b = out.rows[i + 1].rate;
        if (b.mean < a.mean - 3.0 * pooled_se(a.se, b.se)) out.nondecreasing = false;
    }
    return out;
}

WidthExperimentResult width_experiment(const Params& params, const Scales& scales,
                                       InitProfile profile, std::int64_t w0, std::size_t reps,
                                       std::uint64_t seed, int workers) {
    params.validate();
    {
        const Population probe = build_profile(profile, params.n, w0);
        if (probe.width() < scales.width_scale)
            throw std::invalid_argument("width experiment requires initial width >= width_scale");
    }
    std::vector<char> collapsed(reps, 0), escaped(reps, 0), breached(reps, 0);
    for_each_replicate(reps, workers, [&](std::size_t i) {
        Rng rng = replicate_rng(seed, i);
        Population pop = build_profile(profile, params.n, w0);
        const std::int64_t top0 = pop.max_fitness();
        const std::int64_t min0 = pop.min_fitness();
        const std::int64_t width0 = pop.width();
        LabelState labels = LabelState::from_population(pop);
        bool collapse = 4 * pop.min_fitness() > 4 * top0 - width0;
        bool escape = false;
        simulate(params, pop, scales.time_scale, rng,
                 [&](const Event& ev, const StepInfo& info, const Population& p) {
                     labels.apply(ev, info);
                     if (!collapse && 4 * p.min_fitness() > 4 * top0 - width0) collapse = true;
                     if (!escape && (4 * p.max_fitness() > 4 * top0 + width0 ||
                                     4 * p.min_fitness() < 4 * min0 - width0))
                         escape = true;
                 });
        collapsed[i] = collapse;
        escaped[i] = escape;
        breached[i] = labels.breaches().any();
    });
    const auto count = [](const std::vector<char>& v) {
        return (std::size_t)std::count(v.begin(), v.end(), 1);
    };
    WidthExperimentResult out;
    out.collapse_within = binomial_estimate(count(collapsed), reps);
    out.escape_after = binomial_estimate(reps - count(escaped), reps);
    out.breach_union = binomial_estimate(count(breached), reps);
    return out;
}

namespace {

// First complete excursion gain from a width-2W start; nullopt if it does not
// close before the horizon.
std::optional<std::int64_t> first_excursion_gain(const Params& params, Population pop,
                                                 const Scales& scales, double horizon, Rng& rng) {
    ExcursionTracker tracker(scales);
    const std::int64_t top0 = pop.max_fitness();
    tracker.update(0.0, pop.width(), 0);
    while (true) {
        const Event ev = sample_event(pop, params, rng);
        if (ev.time > horizon) return std::nullopt;
        apply_event(pop, ev);
        tracker.update(pop.time(), pop.width(), pop.max_fitness() - top0);
        if (!tracker.progress().gain.empty()) return tracker.progress().gain.front();
    }
}

} // namespace

PropCheckReport check_prop_bounds(const Params& params, const Scales& scales, std::size_t reps,
                                  std::size_t gain_reps, std::uint64_t seed, int workers) {
    params.validate();
    PropCheckReport report;
    const double s_time = 5.0 * scales.time_scale;
    report.horizon = s_time;

    // Group A: direct front displacement.
    std::vector<double> direct(reps);
    for_each_replicate(reps, workers, [&](std::size_t i) {
        Rng rng = replicate_rng(seed, i);
        Population pop = Population::constant(params.n, 0);
        simulate(params, pop, s_time, rng, [](const Event&, const StepInfo&, const Population&) {});
        direct[i] = double(pop.max_fitness());
    });
    report.direct_front = estimate_from(direct);

    // Group B: excursion decomposition of independent runs.
    std::vector<double> counts(reps), gain_sums(reps);
    for_each_replicate(reps, workers, [&](std::size_t i) {
        Rng rng = replicate_rng(seed, reps + i);
        Population pop = Population::constant(params.n, 0);
        ExcursionTracker tracker(scales);
        const std::int64_t top0 = pop.max_fitness();
        tracker.update(0.0, pop.width(), 0);
        simulate(params, pop, s_time, rng,
                 [&](const Event&, const StepInfo&, const Population& p) {
                     tracker.update(p.time(), p.width(), p.max_fitness() - top0);
                 });
        const ExcursionDecomposition d = tracker.finish(s_time);
        counts[i] = double(d.count_at(s_time));
        double sum = double(d.open_gain);
        for (std::int64_t g : d.gain) sum += double(g);
        gain_sums[i] = sum;
    });
    const Estimate gains_mean = estimate_from(gain_sums);
    std::vector<double> count_rates(reps);
    for (std::size_t i = 0; i < reps; ++i) count_rates[i] = counts[i] / s_time;
    report.count_rate = estimate_from(count_rates);
    report.count_bound = 1.0 / scales.time_scale;
    report.count_pass = report.count_rate.mean <= report.count_bound + 3.0 * report.count_rate.se;

    // Restarted-front samples, first block and the full horizon.
    const auto tail = max_offset_tail(scales.width_scale, (std::uint64_t)params.n,
                                      TypeLinearBranch{params.gamma}, params.mu, scales.time_scale);
    std::vector<double> block(reps), front5(reps);
    for (std::size_t i = 0; i < reps; ++i) {
        Rng rng = replicate_rng(seed, 2 * reps + i);
        double sum = 0.0;
        for (int b = 0; b < 5; ++b) {
            const double m = double(sample_from_tail(tail, rng));
            if (b == 0) block[i] = m;
            sum += m;
        }
        front5[i] = sum;
    }
    report.front_block_mean = estimate_from(block);
    report.front_exact_mean = mean_from_tail(tail);
    report.front_bound = 6.0 * double(scales.width_scale);
    report.front_pass =
        report.front_block_mean.mean <= report.front_bound + 3.0 * report.front_block_mean.se;

    const Estimate front5_mean = estimate_from(front5);
    Estimate combined;
    combined.mean = front5_mean.mean + gains_mean.mean;
    combined.se = pooled_se(front5_mean.se, gains_mean.se);
    combined.n = reps;
    combined.lo95 = combined.mean - 1.96 * combined.se;
    combined.hi95 = combined.mean + 1.96 * combined.se;
    report.front_plus_gains = combined;
    report.decomp_slack = 3.0 * pooled_se(report.direct_front.se, combined.se);
    report.decomp_pass = report.direct_front.mean <= combined.mean + report.decomp_slack;

    // First-excursion gain from a width-2W start (surge starts immediately).
    report.gain_bound = 5.0 * double(scales.width_scale);
    std::vector<double> gains;
    std::vector<std::optional<std::int64_t>> gain_values(gain_reps);
    for_each_replicate(gain_reps, workers, [&](std::size_t i) {
        Rng rng = replicate_rng(seed, 3 * reps + i);
        Population pop = build_profile(InitProfile::TwoPointBalanced, params.n,
                                       2 * scales.width_scale);
        gain_values[i] = first_excursion_gain(params, std::move(pop), scales,
                                              50.0 * scales.time_scale, rng);
    });
    for (const auto& g : gain_values) {
        if (g) gains.push_back(double(*g));
        else ++report.gain_unresolved;
    }
    report.gain_samples = gains.size();
    report.gain_sufficient = gains.size() >= 100;
    if (!gains.empty()) {
        report.first_gain = estimate_from(gains);
        report.gain_pass = report.first_gain.mean <= report.gain_bound + 3.0 * report.first_gain.se;
    }
    return report;
}

namespace {

struct ExtremeStats {
    std::int64_t drop = 0; // sup (min0 - min_t)
    std::int64_t rise = 0; // sup (max_t - top0)
};

ExtremeStats run_extremes(const Params& params, int n, double t, Rng& rng) {
    Params p = params;
    p.n = n;
    Population pop = Population::constant(n, 0);
    const std::int64_t top0 = pop.max_fitness();
    const std::int64_t min0 = pop.min_fitness();
    ExtremeStats st;
    simulate(p, pop, t, rng, [&](const Event&, const StepInfo&, const Population& pp) {
        st.drop = std::max(st.drop, min0 - pp.min_fitness());
        st.rise = std::max(st.rise, pp.max_fitness() - top0);
    });
    return st;
}

// Largest drop of a tracked-set member below the threshold, INT64_MIN when
// the set never acquires a member observation.
std::int64_t run_tracked_drop(const Params& params, int n, std::int64_t threshold, double t,
                              Rng& rng) {
    Params p = params;
    p.n = n;
    Population pop = Population::constant(n, 0);
    TrackedSet set = TrackedSet::from_population(pop, threshold);
    constexpr std::int64_t kNever = std::numeric_limits<std::int64_t>::min();
    std::vector<std::int64_t> member_drop(n, kNever);
    for (int i = 0; i < n; ++i)
        if (set.member(i)) member_drop[i] = threshold - pop.fitness(i);
    simulate(p, pop, t, rng, [&](const Event& ev, const StepInfo& info, const Population& pp) {
        set.apply(ev, info);
        const int i = info.affected;
        if (set.member(i)) {
            const std::int64_t d = threshold - pp.fitness(i);
            member_drop[i] = member_drop[i] == kNever ? d : std::max(member_drop[i], d);
        }
    });
    std::int64_t best = kNever;
    for (std::int64_t d : member_drop) best = std::max(best, d);
    return best;
}

} // namespace

std::vector<TailCheckRow> tail_checks(std::size_t reps, std::uint64_t seed, int workers) {
    std::vector<TailCheckRow> rows;
    std::uint64_t stream = 0;
    const auto next_seed = [&] { return splitmix64(seed) + stream++; };

    // Constant-rate branching max type: P(M >= l) <= n0 (t mu)^l e^{Ct} / l!.
    {
        const std::uint64_t n0 = 2;
        const double c = 1.0, mu = 1.0, t = 1.0;
        std::vector<std::int64_t> offsets(reps);
        const std::uint64_t s = next_seed();
        for_each_replicate(reps, workers, [&](std::size_t i) {
            Rng rng = replicate_rng(s, i);
            offsets[i] = simulate_yule(0, n0, ConstantBranch{c}, mu, t, kDefaultParticleCap, rng)
                             .max_offset;
        });
        for (std::uint64_t l : {2, 3, 4}) {
            TailCheckRow row;
            row.family = "yule-const";
            row.config = "n0=2 C=1 mu=1 t=1";
            row.l = l;
            std::size_t hits = 0;
            for (auto m : offsets) hits += (std::uint64_t)m >= l;
            row.empirical = binomial_estimate(hits, reps);
            row.bound = yule_max_tail_bound(double(n0), t, mu, c, l).prob;
            row.pass = row.empirical.mean <= row.bound + 3.0 * row.empirical.se;
            rows.push_back(row);
        }
    }

    // Type-linear branching max type: P(M > l) <= n0 (t mu)^l e^{(g(k+l)+1)t} / l!.
    {
        const std::uint64_t n0 = 3;
        const double g = 1.0, mu = 1.0, t = 0.5;
        const std::int64_t k = 2;
        std::vector<std::int64_t> offsets(reps);
        const std::uint64_t s = next_seed();
        for_each_replicate(reps, workers, [&](std::size_t i) {
            Rng rng = replicate_rng(s, i);
            offsets[i] =
                simulate_yule(k, n0, TypeLinearBranch{g}, mu, t, kDefaultParticleCap, rng)
                    .max_offset;
        });
        for (std::uint64_t l : {3, 4, 5}) {
            TailCheckRow row;
            row.family = "yule-linear";
            row.config = "n0=3 gamma=1 mu=1 k=2 t=0.5";
            row.l = l;
            std::size_t hits = 0;
            for (auto m : offsets) hits += (std::uint64_t)m > l;
            row.empirical = binomial_estimate(hits, reps);
            row.bound = type_linear_max_tail_bound(double(n0), t, mu, g, k, l).prob;
            row.pass = row.empirical.mean <= row.bound + 3.0 * row.empirical.se;
            rows.push_back(row);
        }
    }

    // Population min-drop tails, P(S_t >= l), and front-rise tails,
    // P(sup D > l), from plain runs at the all-zero start.
    Params params;
    params.mu = 1.0;
    params.q = 0.5;
    params.gamma = 1.0;
    for (int n : {10, 50}) {
        for (double t : {0.5, 1.0, 2.0}) {
            std::vector<ExtremeStats> stats(reps);
            const std::uint64_t s = next_seed();
            for_each_replicate(reps, workers, [&](std::size_t i) {
                Rng rng = replicate_rng(s, i);
                stats[i] = run_extremes(params, n, t, rng);
            });
            for (std::uint64_t l : {1, 2, 3, 4, 5, 6}) {
                TailCheckRow row;
                row.family = "min-drop";
                row.config = "n=" + std::to_string(n) + " t=" + std::to_string(t);
                row.l = l;
                std::size_t hits = 0;
                for (const auto& st : stats) hits += (std::uint64_t)st.drop >= l;
                row.empirical = binomial_estimate(hits, reps);
                row.bound = min_drop_tail_bound(double(n), t, params.mu, l).prob;
                row.pass = row.empirical.mean <= row.bound + 3.0 * row.empirical.se;
                rows.push_back(row);
            }
            if (n == 10 && t == 0.5) {
                for (std::uint64_t l : {2, 3, 4, 5, 6}) {
                    TailCheckRow row;
                    row.family = "front-rise";
                    row.config = "n=10 w0=0 t=0.5";
                    row.l = l;
                    std::size_t hits = 0;
                    for (const auto& st : stats) hits += (std::uint64_t)st.rise > l;
                    row.empirical = binomial_estimate(hits, reps);
                    row.bound =
                        front_rise_tail_bound(double(n), t, params.mu, params.gamma, 0, l).prob;
                    row.pass = row.empirical.mean <= row.bound + 3.0 * row.empirical.se;
                    rows.push_back(row);
                }
            }
        }
    }

    // Tracked-set drop events vs the same front-rise style bound.
    {
        const int n = 10;
        const double t = 0.5;
        const std::int64_t threshold = -1; // all-zero start: everyone starts a member
        std::vector<std::int64_t> drops(reps);
        const std::uint64_t s = next_seed();
        for_each_replicate(reps, workers, [&](std::size_t i) {
            Rng rng = replicate_rng(s, i);
            drops[i] = run_tracked_drop(params, n, threshold, t, rng);
        });
        for (std::uint64_t l : {2, 3, 4}) {
            TailCheckRow row;
            row.family = "tracked-drop";
            row.config = "n=10 x=-1 t=0.5 w0=0";
            row.l = l;
            std::size_t hits = 0;
            for (auto d : drops)
                hits += d != std::numeric_limits<std::int64_t>::min() && d >= (std::int64_t)l;
            row.empirical = binomial_estimate(hits, reps);
            row.bound = front_rise_tail_bound(double(n), t, params.mu, params.gamma, 0, l).prob;
            row.pass = row.empirical.mean <= row.bound + 3.0 * row.empirical.se;
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<CoupleCheckRow> couple_checks(std::size_t runs, std::uint64_t seed, int workers) {
    Params params;
    params.mu = 1.0;
    params.q = 0.5;
    params.gamma = 1.0;

    std::vector<CoupleCheckRow> rows;
    std::uint64_t stream = 0;

    for (int n : {10, 20}) {
        CoupleCheckRow row;
        row.driver = "min-drop";
        row.n = n;
        row.t = 2.0;
        row.runs = runs;
        Params p = params;
        p.n = n;
        std::vector<CouplingReport> reports(runs);
        const std::uint64_t s = splitmix64(seed) + stream++;
        for_each_replicate(runs, workers, [&](std::size_t i) {
            Rng rng = replicate_rng(s, i);
            reports[i] = couple_min_drop(p, Population::constant(n, 0), row.t, rng);
        });
        for (const auto& r : reports) {
            row.dominance_violations += r.dominance_violations;
            row.welldef_violations += r.welldef_violations;
        }
        rows.push_back(row);
    }

    for (int n : {10, 20}) {
        CoupleCheckRow row;
        row.driver = "front-rise";
        row.n = n;
        row.k = 3;
        row.t = 2.0;
        row.runs = runs;
        Params p = params;
        p.n = n;
        std::vector<CouplingReport> reports(runs);
        const std::uint64_t s = splitmix64(seed) + stream++;
        for_each_replicate(runs, workers, [&](std::size_t i) {
            Rng rng = replicate_rng(s, i);
            reports[i] = couple_front_rise(p, Population::constant(n, 0), row.k, row.t, rng);
        });
        for (const auto& r : reports) {
            row.dominance_violations += r.dominance_violations;
            row.welldef_violations += r.welldef_violations;
            row.stopped_runs += r.stop_time.has_value();
        }
        rows.push_back(row);
    }

    {
        CoupleCheckRow row;
        row.driver = "tracked-set";
        row.n = 10;
        row.k = 3;
        row.t = 1.0;
        row.runs = runs;
        Params p = params;
        p.n = 10;
        std::vector<CouplingReport> reports(runs);
        const std::uint64_t s = splitmix64(seed) + stream++;
        for_each_replicate(runs, workers, [&](std::size_t i) {
            Rng rng = replicate_rng(s, i);
            reports[i] = couple_tracked_set(p, Population::constant(10, 0), -1, row.k, row.t, rng);
        });
        for (const auto& r : reports) {
            row.dominance_violations += r.dominance_violations;
            row.welldef_violations += r.welldef_violations;
            row.stopped_runs += r.stop_time.has_value();
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace fitwave
