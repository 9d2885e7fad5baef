#include "fitwave/labels.hpp"

namespace fitwave {

LabelState LabelState::from_population(const Population& pop) {
    LabelState s;
    s.bounds_.top0 = pop.max_fitness();
    s.bounds_.w0 = pop.width();
    const int n = pop.size();
    s.primary_.resize(n);
    s.secondary_.resize(n);
    for (int i = 0; i < n; ++i) {
        const std::int64_t f = pop.fitness(i);
        s.primary_[i] = s.bounds_.primary_of(f);
        s.secondary_[i] = s.bounds_.secondary_of(f);
        ++s.tally_[(int)s.primary_[i]];
        ++s.tally2_[(int)s.secondary_[i]];
        s.check_guards(i, f);
    }
    return s;
}

void LabelState::set_primary(int i, Band b) {
    --tally_[(int)primary_[i]];
    primary_[i] = b;
    ++tally_[(int)b];
}

void LabelState::set_secondary(int i, Band b) {
    --tally2_[(int)secondary_[i]];
    secondary_[i] = b;
    ++tally2_[(int)b];
}

void LabelState::check_guards(int i, std::int64_t f) {
    if (primary_[i] == Band::Middle && bounds_.below_line(f, 5)) breach_.primary_mid = true;
    if (primary_[i] == Band::Top && bounds_.below_line(f, 3)) breach_.primary_top = true;
    if (secondary_[i] == Band::Middle && bounds_.below_line(f, 7)) breach_.secondary_mid = true;
    if (secondary_[i] == Band::Top && bounds_.below_line(f, 5)) breach_.secondary_top = true;
}

void LabelState::apply(const Event& event, const StepInfo& info) {
    const int i = info.affected;
    switch (event.kind) {
    case Event::Kind::MutUp:
        if (primary_[i] == Band::Bottom && bounds_.primary_of(info.new_fitness) == Band::Middle)
            set_primary(i, Band::Middle);
        else if (primary_[i] == Band::Middle && bounds_.primary_of(info.new_fitness) == Band::Top)
            set_primary(i, Band::Top);
        if (secondary_[i] == Band::Bottom && bounds_.secondary_of(info.new_fitness) == Band::Middle)
            set_secondary(i, Band::Middle);
        else if (secondary_[i] == Band::Middle && bounds_.secondary_of(info.new_fitness) == Band::Top)
            set_secondary(i, Band::Top);
        break;
    case Event::Kind::MutDown:
        break; // deleterious mutations never relabel
    case Event::Kind::Resample:
        set_primary(i, primary_[event.actor]);
        set_secondary(i, secondary_[event.actor]);
        break;
    case Event::Kind::Select:
        if (primary_[i] == Band::Bottom)
            set_primary(i, primary_[event.actor]);
        else if (primary_[i] == Band::Middle && primary_[event.actor] == Band::Top)
            set_primary(i, Band::Top);
        if (secondary_[i] == Band::Bottom)
            set_secondary(i, secondary_[event.actor]);
        else if (secondary_[i] == Band::Middle && secondary_[event.actor] == Band::Top)
            set_secondary(i, Band::Top);
        break;
    }
    check_guards(i, info.new_fitness);
}

} // namespace fitwave
