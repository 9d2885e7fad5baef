#include "fitwave/tracked_set.hpp"

namespace fitwave {

TrackedSet TrackedSet::from_population(const Population& pop, std::int64_t threshold) {
    TrackedSet s;
    s.threshold_ = threshold;
    s.member_.assign(pop.size(), 0);
    for (int i = 0; i < pop.size(); ++i) {
        if (pop.fitness(i) > threshold) {
            s.member_[i] = 1;
            ++s.count_;
        }
    }
    return s;
}

void TrackedSet::apply(const Event& event, const StepInfo& info) {
    switch (event.kind) {
    case Event::Kind::MutUp:
        if (!member_[info.affected] && info.old_fitness == threshold_) {
            member_[info.affected] = 1;
            ++count_;
        }
        break;
    case Event::Kind::MutDown:
        break;
    case Event::Kind::Resample:
        if (member_[event.actor] != member_[event.target]) {
            member_[event.target] = member_[event.actor];
            count_ += member_[event.actor] ? 1 : -1;
        }
        break;
    case Event::Kind::Select:
        if (member_[event.actor] && !member_[event.target]) {
            member_[event.target] = 1;
            ++count_;
        }
        break;
    }
}

} // namespace fitwave
