#include "fitwave/coupling.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "fitwave/moran.hpp"

namespace fitwave {

namespace {

constexpr std::int64_t kNeverMember = std::numeric_limits<std::int64_t>::min();

// Prefix index over the fitness classes; pressure_num(x) = N * U(x) where
// U(x) is the per-individual replacement pressure (1/N) sum_j (x - x_j)^+.
// Integer arithmetic, so the well-definedness comparisons are exact.
struct ClassPrefix {
    std::vector<std::int64_t> values;
    std::vector<std::int64_t> count_below;
    std::vector<std::int64_t> sum_below;

    void build(const Population& pop) {
        values.clear();
        count_below.clear();
        sum_below.clear();
        std::int64_t cnt = 0, sum = 0;
        for (const auto& [value, members] : pop.classes()) {
            values.push_back(value);
            count_below.push_back(cnt);
            sum_below.push_back(sum);
            cnt += (std::int64_t)members.size();
            sum += (std::int64_t)members.size() * value;
        }
    }

    std::int64_t pressure_num(std::int64_t x) const {
        auto it = std::upper_bound(values.begin(), values.end(), x);
        const auto idx = std::size_t(it - values.begin());
        // x is always an existing class value, so idx >= 1.
        return x * count_below[idx - 1] - sum_below[idx - 1];
    }
};

// Branching side of a coupling: one explicit particle per individual plus a
// type census of the unpaired particles. Unpaired particles never regain a
// pairing, so exchangeability makes the census representation exact. Types
// never decrease, so the census is a flat array indexed from the start type;
// populations reach millions of particles and these scans are the hot path.
struct BranchSide {
    std::int64_t start_type = 0;
    std::vector<std::int64_t> pair_type;
    std::vector<std::uint64_t> census; // census[o] = unpaired particles of type start_type + o
    std::uint64_t census_count = 0;
    std::int64_t census_offset_sum = 0; // sum of (type - start_type) over unpaired
    std::int64_t pair_type_sum = 0;
    std::int64_t max_type = 0;

    void init(int n, std::int64_t t0) {
        start_type = t0;
        pair_type.assign(n, t0);
        pair_type_sum = t0 * n;
        max_type = t0;
    }

    std::int64_t max_offset() const { return max_type - start_type; }
    std::int64_t census_type_sum() const {
        return census_offset_sum + start_type * (std::int64_t)census_count;
    }

    void add_unpaired(std::int64_t type) {
        const auto o = (std::size_t)(type - start_type);
        if (o >= census.size()) census.resize(o + 1, 0);
        ++census[o];
        ++census_count;
        census_offset_sum += (std::int64_t)o;
    }

    void advance_pair(int i) {
        ++pair_type[i];
        ++pair_type_sum;
        max_type = std::max(max_type, pair_type[i]);
    }

    // Survivor i's particle branches on a replacement of j; the new particle
    // takes over j's pairing when the survivor's type is at least j's
    // (either choice is valid on ties since the types are equal).
    void branch_with_transfer(int i, int j) {
        if (pair_type[i] >= pair_type[j]) {
            add_unpaired(pair_type[j]);
            pair_type_sum += pair_type[i] - pair_type[j];
            pair_type[j] = pair_type[i];
        } else {
            add_unpaired(pair_type[i]);
        }
    }

    void branch_unpaired_constant(Rng& rng) {
        std::uint64_t pick = rng.below(census_count);
        for (std::size_t o = 0; o < census.size(); ++o) {
            if (pick < census[o]) {
                add_unpaired(start_type + (std::int64_t)o);
                return;
            }
            pick -= census[o];
        }
    }

    void branch_unpaired_type_linear(double gamma, double total, Rng& rng) {
        double pick = rng.uniform() * total;
        for (std::size_t o = 0; o < census.size(); ++o) {
            if (census[o] == 0) continue;
            const std::int64_t type = start_type + (std::int64_t)o;
            const double w = double(census[o]) * (gamma * double(type) + 1.0);
            if (pick < w) {
                add_unpaired(type);
                return;
            }
            pick -= w;
        }
        // Floating-point edge: fall back to the highest occupied type.
        for (std::size_t o = census.size(); o-- > 0;) {
            if (census[o] > 0) {
                add_unpaired(start_type + (std::int64_t)o);
                return;
            }
        }
    }

    void advance_unpaired(Rng& rng) {
        std::uint64_t pick = rng.below(census_count);
        for (std::size_t o = 0; o < census.size(); ++o) {
            if (pick < census[o]) {
                --census[o];
                ++census_offset_sum;
                const std::int64_t type = start_type + (std::int64_t)o + 1;
                if (o + 1 >= census.size()) census.resize(o + 2, 0);
                ++census[o + 1];
                max_type = std::max(max_type, type);
                return;
            }
            pick -= census[o];
        }
    }
};

void snapshot_population(CouplingReport& rep, const Population& pop, const BranchSide& z) {
    rep.pop_mean_fitness = pop.mean_fitness();
    rep.pop_width = pop.width();
    rep.particle_count = (std::uint64_t)pop.size() + z.census_count;
}

} // namespace

CouplingReport couple_min_drop(const Params& params, const Population& initial, double t_end,
                               Rng& rng, bool record_series) {
    params.validate();
    if (!(t_end > 0)) throw std::invalid_argument("couple_min_drop: t_end must be > 0");

    Population pop = initial;
    const int n = pop.size();
    const std::int64_t min0 = pop.min_fitness();

    BranchSide z;
    z.init(n, 0);

    std::vector<std::int64_t> drop_sup(n);
    for (int i = 0; i < n; ++i) drop_sup[i] = min0 - pop.fitness(i);
    std::int64_t sup_drop = 0; // max_i drop_sup[i] at the start

    CouplingReport rep;
    if (record_series) rep.series.push_back({0.0, sup_drop, z.max_offset()});

    double t = 0.0;
    RateBreakdown mr = total_rates(pop, params);
    while (true) {
        const double aux_branch = 1.0; // N paired particles at rate 1/N each
        const double unpaired_branch = double(z.census_count); // constant rate 1
        const double unpaired_advance = params.mu * double(z.census_count);
        const double total = mr.total + aux_branch + unpaired_branch + unpaired_advance;

        t += rng.exponential(total);
        if (t > t_end) break;
        pop.set_time(t);

        int changed = -1;
        double pick = rng.uniform() * total;
        if (pick < mr.mutation) {
            const int i = (int)rng.below32((std::uint32_t)n);
            pop.mutate(i, rng.bernoulli(params.q) ? 1 : -1);
            z.advance_pair(i);
            changed = i;
        } else if ((pick -= mr.mutation) < mr.resampling) {
            const int i = (int)rng.below32((std::uint32_t)n);
            int j = (int)rng.below32((std::uint32_t)(n - 1));
            if (j >= i) ++j;
            pop.replace(j, i);
            z.branch_with_transfer(i, j);
            changed = j;
        } else if ((pick -= mr.resampling) < mr.selection) {
            const Event ev = sample_selection_event(pop, mr.selection_weight, t, rng);
            pop.replace(ev.target, ev.actor);
            changed = ev.target;
            // Selection is independent of the branching side.
        } else if ((pick -= mr.selection) < aux_branch) {
            const int i = (int)rng.below32((std::uint32_t)n);
            z.add_unpaired(z.pair_type[i]);
        } else if ((pick -= aux_branch) < unpaired_branch) {
            z.branch_unpaired_constant(rng);
        } else {
            z.advance_unpaired(rng);
        }

        // The dominance inequality can only break when a fitness changes:
        // paired types never decrease and the drop statistic moves only on
        // population events.
        if (changed >= 0) {
            mr = total_rates(pop, params);
            drop_sup[changed] = std::max(drop_sup[changed], min0 - pop.fitness(changed));
            for (int i = 0; i < n; ++i) {
                if (drop_sup[i] > z.pair_type[i]) ++rep.dominance_violations;
                sup_drop = std::max(sup_drop, drop_sup[i]);
            }
        }
        if (record_series && (rep.series.back().process_stat != sup_drop ||
                              rep.series.back().branching_stat != z.max_offset()))
            rep.series.push_back({t, sup_drop, z.max_offset()});
    }

    pop.set_time(t_end);
    rep.horizon = t_end;
    rep.process_stat = sup_drop;
    rep.branching_stat = z.max_offset();
    snapshot_population(rep, pop, z);
    return rep;
}

namespace {

// Shared driver for the front-rise coupling and its tracked-set extension.
CouplingReport run_front_rise(const Params& params, const Population& initial,
                              std::optional<std::int64_t> tracked_threshold, int k, double t_end,
                              Rng& rng, bool record_series) {
    params.validate();
    if (k < 1) throw std::invalid_argument("couple_front_rise: k must be >= 1");
    if (!(t_end > 0)) throw std::invalid_argument("couple_front_rise: t_end must be > 0");

    Population pop = initial;
    const int n = pop.size();
    const std::int64_t top0 = pop.max_fitness();
    const std::int64_t min0 = pop.min_fitness();
    const std::int64_t start_type = pop.width() + k;

    BranchSide z;
    z.init(n, start_type);

    std::vector<std::int64_t> rise_sup(n);  // sup_s (x_i(s) - top0)
    std::vector<std::int64_t> drop_sup(n);  // sup_s (min0 - x_i(s)), drives the stop rule
    for (int i = 0; i < n; ++i) {
        rise_sup[i] = pop.fitness(i) - top0;
        drop_sup[i] = min0 - pop.fitness(i);
    }
    std::int64_t sup_rise = 0;
    std::int64_t sup_drop = 0;

    std::vector<std::int64_t> member_drop; // tracked-set flavor only
    std::vector<char> member;
    if (tracked_threshold) {
        member_drop.assign(n, kNeverMember);
        member.assign(n, 0);
        for (int i = 0; i < n; ++i) {
            if (pop.fitness(i) > *tracked_threshold) {
                member[i] = 1;
                member_drop[i] = *tracked_threshold - pop.fitness(i);
            }
        }
    }

    ClassPrefix prefix;
    CouplingReport rep;
    rep.tracked_stat = kNeverMember;
    if (record_series) rep.series.push_back({0.0, sup_rise, z.max_offset()});

    bool coupled = true;
    double coupled_until = t_end;
    std::int64_t frozen_rise = 0, frozen_offset = 0;

    double t = 0.0;
    RateBreakdown mr = total_rates(pop, params);
    while (true) {
        double aux_branch = 0.0, comp_branch = 0.0, unpaired_branch = 0.0, unpaired_advance = 0.0;
        if (coupled) {
            aux_branch = 1.0;
            // gamma * sum_i (R_i - U_i) = gamma * (N * sum R_i - sum U_num) / N
            const double comp_num =
                double(z.pair_type_sum) * double(n) - double(mr.selection_weight);
            comp_branch = std::max(0.0, params.gamma * comp_num / double(n));
            unpaired_branch =
                params.gamma * double(z.census_type_sum()) + double(z.census_count);
            unpaired_advance = params.mu * double(z.census_count);
        }
        const double total =
            mr.total + aux_branch + comp_branch + unpaired_branch + unpaired_advance;

        t += rng.exponential(total);
        if (t > t_end) break;
        pop.set_time(t);

        int affected = -1; // individual whose fitness changed, if any
        double pick = rng.uniform() * total;
        if (pick < mr.mutation) {
            const int i = (int)rng.below32((std::uint32_t)n);
            const std::int64_t old_fit = pop.fitness(i);
            const bool up = rng.bernoulli(params.q);
            pop.mutate(i, up ? 1 : -1);
            if (coupled) z.advance_pair(i);
            affected = i;
            if (tracked_threshold && up && !member[i] && old_fit == *tracked_threshold)
                member[i] = 1;
        } else if ((pick -= mr.mutation) < mr.resampling) {
            const int i = (int)rng.below32((std::uint32_t)n);
            int j = (int)rng.below32((std::uint32_t)(n - 1));
            if (j >= i) ++j;
            pop.replace(j, i);
            if (coupled) z.branch_with_transfer(i, j);
            affected = j;
            if (tracked_threshold && member[i] != member[j]) member[j] = member[i];
        } else if ((pick -= mr.resampling) < mr.selection) {
            const Event ev = sample_selection_event(pop, mr.selection_weight, t, rng);
            pop.replace(ev.target, ev.actor);
            if (coupled) z.branch_with_transfer(ev.actor, ev.target);
            affected = ev.target;
            if (tracked_threshold && member[ev.actor] && !member[ev.target]) member[ev.target] = 1;
        } else if ((pick -= mr.selection) < aux_branch) {
            const int i = (int)rng.below32((std::uint32_t)n);
            z.add_unpaired(z.pair_type[i]);
        } else if ((pick -= aux_branch) < comp_branch) {
            // Choose the branching individual proportionally to R_i - U_i.
            prefix.build(pop);
            std::vector<double> weights(n);
            double wsum = 0.0;
            for (int i = 0; i < n; ++i) {
                const double w = double(z.pair_type[i]) -
                                 double(prefix.pressure_num(pop.fitness(i))) / double(n);
                weights[i] = std::max(0.0, w);
                wsum += weights[i];
            }
            double p2 = rng.uniform() * wsum;
            int chosen = n - 1;
            for (int i = 0; i < n; ++i) {
                if (p2 < weights[i]) {
                    chosen = i;
                    break;
                }
                p2 -= weights[i];
            }
            z.add_unpaired(z.pair_type[chosen]);
        } else if ((pick -= comp_branch) < unpaired_branch) {
            z.branch_unpaired_type_linear(params.gamma, unpaired_branch, rng);
        } else {
            z.advance_unpaired(rng);
        }

        if (affected >= 0) {
            mr = total_rates(pop, params);
            rise_sup[affected] = std::max(rise_sup[affected], pop.fitness(affected) - top0);
            drop_sup[affected] = std::max(drop_sup[affected], min0 - pop.fitness(affected));
            if (tracked_threshold && member[affected]) {
                const std::int64_t d = *tracked_threshold - pop.fitness(affected);
                member_drop[affected] =
                    member_drop[affected] == kNeverMember ? d : std::max(member_drop[affected], d);
            }
        }

        // Replacement pressure and the sup statistics move only on population
        // events, and particle types never decrease, so the inequalities can
        // only break when a fitness changed; sweeps are skipped on pure
        // branching events.
        if (coupled && affected >= 0) {
            for (int i = 0; i < n; ++i) {
                sup_rise = std::max(sup_rise, rise_sup[i]);
                sup_drop = std::max(sup_drop, drop_sup[i]);
            }
            if (sup_drop > k) {
                // The joint construction is defined only up to this instant;
                // no inequality is asserted on the stopping event itself.
                rep.stop_time = t;
                coupled = false;
                coupled_until = t;
                frozen_rise = sup_rise;
                frozen_offset = z.max_offset();
            } else {
                prefix.build(pop);
                for (int i = 0; i < n; ++i) {
                    if (rise_sup[i] > z.pair_type[i] - start_type) ++rep.dominance_violations;
                    if (prefix.pressure_num(pop.fitness(i)) > z.pair_type[i] * (std::int64_t)n)
                        ++rep.welldef_violations;
                    if (tracked_threshold && member_drop[i] != kNeverMember &&
                        member_drop[i] > z.pair_type[i] - start_type)
                        ++rep.dominance_violations;
                }
            }
        }
        if (coupled && record_series && (rep.series.back().process_stat != sup_rise ||
                                         rep.series.back().branching_stat != z.max_offset()))
            rep.series.push_back({t, sup_rise, z.max_offset()});
    }

    pop.set_time(t_end);
    rep.horizon = coupled_until;
    rep.process_stat = coupled ? sup_rise : frozen_rise;
    rep.branching_stat = coupled ? z.max_offset() : frozen_offset;
    if (tracked_threshold) {
        std::int64_t best = kNeverMember;
        for (int i = 0; i < n; ++i) best = std::max(best, member_drop[i]);
        rep.tracked_stat = best;
    }
    snapshot_population(rep, pop, z);
    return rep;
}

} // namespace

CouplingReport couple_front_rise(const Params& params, const Population& initial, int k,
                                 double t_end, Rng& rng, bool record_series) {
    return run_front_rise(params, initial, std::nullopt, k, t_end, rng, record_series);
}

CouplingReport couple_tracked_set(const Params& params, const Population& initial,
                                  std::int64_t threshold, int k, double t_end, Rng& rng) {
    return run_front_rise(params, initial, threshold, k, t_end, rng, false);
}

} // namespace fitwave
