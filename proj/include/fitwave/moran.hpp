#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "fitwave/params.hpp"
#include "fitwave/population.hpp"
#include "fitwave/rng.hpp"

namespace fitwave {

struct RateBreakdown {
    double mutation = 0.0;   // N * mu
    double resampling = 0.0; // N(N-1) ordered pairs at rate 1/N each
    double selection = 0.0;  // (gamma/N) * sum over ordered pairs of positive gaps
    double total = 0.0;
    // Integer pair weight sum_{k>l} c_k c_l (v_k - v_l); kept exact so that
    // selection-pair sampling uses integer arithmetic.
    std::uint64_t selection_weight = 0;
};

RateBreakdown total_rates(const Population& pop, const Params& params);

struct Event {
    enum class Kind : std::uint8_t { MutUp, MutDown, Resample, Select };
    Kind kind = Kind::MutUp;
    std::int32_t actor = -1;  // mutating individual, or the survivor in a replacement
    std::int32_t target = -1; // replaced individual (replacement kinds only)
    double time = 0.0;
};

// Competing-exponentials draw of the next event. Does not modify the
// population; the event carries its absolute time.
Event sample_event(const Population& pop, const Params& params, Rng& rng);

// Draws an ordered selection pair (survivor, replaced) with probability
// proportional to the fitness gap; `weight` must be the selection_weight of
// the current state. Used by the coupled drivers, which own their clocks.
Event sample_selection_event(const Population& pop, std::uint64_t weight, double time, Rng& rng);

struct StepInfo {
    std::int32_t affected = -1; // individual whose fitness changed
    std::int64_t old_fitness = 0;
    std::int64_t new_fitness = 0;
};

// Applies the event and advances the population clock. Throws logic_error if
// a Select event has a nonpositive gap, which can only happen when an event
// is applied against a state it was not sampled from.
StepInfo apply_event(Population& pop, const Event& event);

struct EventCapError : std::runtime_error {
    EventCapError(std::uint64_t cap, double time_reached)
        : std::runtime_error("event cap of " + std::to_string(cap) +
                             " exceeded at simulation time " + std::to_string(time_reached)),
          cap(cap),
          time_reached(time_reached) {}
    std::uint64_t cap;
    double time_reached;
};

inline constexpr std::uint64_t kDefaultEventCap = 10'000'000'000ull;

// Core event loop. The observer is called after every applied event as
// observe(event, step_info, population).
template <class Obs>
std::uint64_t simulate(const Params& params, Population& pop, double t_end, Rng& rng,
                       std::uint64_t max_events, Obs&& observe) {
    std::uint64_t events = 0;
    while (true) {
        const Event ev = sample_event(pop, params, rng);
        if (ev.time > t_end) {
            pop.set_time(t_end);
            return events;
        }
        if (events == max_events) throw EventCapError(max_events, pop.time());
        ++events;
        const StepInfo info = apply_event(pop, ev);
        observe(ev, info, pop);
    }
}

template <class Obs>
std::uint64_t simulate(const Params& params, Population& pop, double t_end, Rng& rng,
                       Obs&& observe) {
    return simulate(params, pop, t_end, rng, kDefaultEventCap, static_cast<Obs&&>(observe));
}

} // namespace fitwave
