#include "fitwave/moran.hpp"

namespace fitwave {

RateBreakdown total_rates(const Population& pop, const Params& params) {
    const int n = pop.size();
    RateBreakdown r;
    r.mutation = double(n) * params.mu;
    r.resampling = double(n - 1);

    // One ascending pass: for class (v, c) every strictly lower class
    // contributes c * c_low * (v - v_low).
    std::uint64_t weight = 0;
    std::int64_t count_below = 0;
    std::int64_t sum_below = 0;
    for (const auto& [value, members] : pop.classes()) {
        const auto c = (std::int64_t)members.size();
        weight += (std::uint64_t)(c * (value * count_below - sum_below));
        count_below += c;
        sum_below += c * value;
    }
    r.selection_weight = weight;
    r.selection = params.gamma * double(weight) / double(n);
    r.total = r.mutation + r.resampling + r.selection;
    return r;
}

Event sample_selection_event(const Population& pop, std::uint64_t weight, double t, Rng& rng) {
    // Draw an ordered class pair (upper, lower) with probability proportional
    // to c_u * c_l * (v_u - v_l), then uniform members within the classes.
    std::uint64_t pick = rng.below(weight);
    const auto& classes = pop.classes();
    for (auto upper = std::next(classes.begin()); upper != classes.end(); ++upper) {
        const auto cu = (std::uint64_t)upper->second.size();
        for (auto lower = classes.begin(); lower != upper; ++lower) {
            const auto cl = (std::uint64_t)lower->second.size();
            const std::uint64_t w = cu * cl * (std::uint64_t)(upper->first - lower->first);
            if (pick < w) {
                Event ev;
                ev.kind = Event::Kind::Select;
                ev.actor = upper->second[rng.below32((std::uint32_t)cu)];
                ev.target = lower->second[rng.below32((std::uint32_t)cl)];
                ev.time = t;
                return ev;
            }
            pick -= w;
        }
    }
    throw std::logic_error("selection pair weight scan exhausted");
}

Event sample_event(const Population& pop, const Params& params, Rng& rng) {
    const RateBreakdown rates = total_rates(pop, params);
    const double t = pop.time() + rng.exponential(rates.total);
    const double pick = rng.uniform() * rates.total;

    const int n = pop.size();
    if (pick < rates.mutation) {
        Event ev;
        ev.actor = (std::int32_t)rng.below32((std::uint32_t)n);
        ev.kind = rng.bernoulli(params.q) ? Event::Kind::MutUp : Event::Kind::MutDown;
        ev.time = t;
        return ev;
    }
    if (pick < rates.mutation + rates.resampling) {
        Event ev;
        ev.kind = Event::Kind::Resample;
        ev.actor = (std::int32_t)rng.below32((std::uint32_t)n);
        std::int32_t j = (std::int32_t)rng.below32((std::uint32_t)(n - 1));
        if (j >= ev.actor) ++j;
        ev.target = j;
        ev.time = t;
        return ev;
    }
    return sample_selection_event(pop, rates.selection_weight, t, rng);
}

StepInfo apply_event(Population& pop, const Event& event) {
    StepInfo info;
    switch (event.kind) {
    case Event::Kind::MutUp:
    case Event::Kind::MutDown:
        info.affected = event.actor;
        info.old_fitness = pop.fitness(event.actor);
        pop.mutate(event.actor, event.kind == Event::Kind::MutUp ? 1 : -1);
        info.new_fitness = pop.fitness(event.actor);
        break;
    case Event::Kind::Select:
        if (pop.fitness(event.actor) <= pop.fitness(event.target))
            throw std::logic_error("select event with nonpositive fitness gap");
        [[fallthrough]];
    case Event::Kind::Resample:
        info.affected = event.target;
        info.old_fitness = pop.fitness(event.target);
        pop.replace(event.target, event.actor);
        info.new_fitness = pop.fitness(event.target);
        break;
    }
    pop.set_time(event.time);
    return info;
}

} // namespace fitwave
