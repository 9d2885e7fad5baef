#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fitwave/params.hpp"
#include "fitwave/population.hpp"
#include "fitwave/rng.hpp"

namespace fitwave {

// Result of driving the population and a branching process from one shared
// event stream. Violation tallies are exact event-by-event counts; any
// nonzero count falsifies the implementation, so they are reported rather
// than thrown.
struct CouplingReport {
    double horizon = 0.0; // time up to which the joint construction ran
    std::uint64_t dominance_violations = 0;
    std::uint64_t welldef_violations = 0;
    std::optional<double> stop_time; // first time the min fitness dropped past k

    std::int64_t process_stat = 0;   // sup min-drop, or sup front rise, per driver
    std::int64_t branching_stat = 0; // matching max type offset of the branching side

    // Tracked-set flavor: largest drop of any member below the threshold
    // while a member; INT64_MIN when the set stayed empty.
    std::int64_t tracked_stat = 0;

    struct Sample {
        double t;
        std::int64_t process_stat;
        std::int64_t branching_stat;
    };
    std::vector<Sample> series;

    // Population snapshot at t_end (taken even when the joint construction
    // stopped earlier) for marginal-law comparisons.
    double pop_mean_fitness = 0.0;
    std::int64_t pop_width = 0;
    std::uint64_t particle_count = 0;
};

// Population coupled with a constant-rate-1 branching process whose max type
// offset dominates the running drop of the minimum fitness. Mutations drive
// the paired particle types; resampling branches the survivor's particle;
// selection leaves the branching side untouched.
CouplingReport couple_min_drop(const Params& params, const Population& initial, double t_end,
                               Rng& rng, bool record_series = false);

// Population coupled with a type-linear branching process started at type
// W0 + k whose max type offset dominates the running rise of the maximum
// fitness. Selection events branch the survivor's particle and independent
// compensating branches at rate gamma * (type - replacement pressure) round
// the paired branch rate up to the type-linear law. The joint construction
// stops at the first time the min fitness has dropped by more than k; the
// population keeps running to t_end for marginal comparisons.
CouplingReport couple_front_rise(const Params& params, const Population& initial, int k,
                                 double t_end, Rng& rng, bool record_series = false);

// couple_front_rise plus the tracked set above `threshold` on the same event
// stream; also checks member drops against the particle types.
CouplingReport couple_tracked_set(const Params& params, const Population& initial,
                                  std::int64_t threshold, int k, double t_end, Rng& rng);

} // namespace fitwave
