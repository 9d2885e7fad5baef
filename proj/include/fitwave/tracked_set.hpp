#pragma once

#include <cstdint>
#include <vector>

#include "fitwave/moran.hpp"
#include "fitwave/population.hpp"

namespace fitwave {

// Descendant set of the individuals initially above a fitness threshold.
// Membership rules:
//  - starts as everyone with fitness in (threshold, inf);
//  - a non-member replaced (resampling or selection) by a member joins;
//  - a non-member whose beneficial mutation moves it threshold -> threshold+1
//    joins;
//  - a member replaced by a non-member through *resampling* leaves.
// Mutation and selection events never remove members.
class TrackedSet {
public:
    static TrackedSet from_population(const Population& pop, std::int64_t threshold);

    void apply(const Event& event, const StepInfo& info);

    bool member(int i) const { return member_[i] != 0; }
    int count() const { return count_; }
    std::int64_t threshold() const { return threshold_; }

private:
    std::int64_t threshold_ = 0;
    std::vector<char> member_;
    int count_ = 0;
};

} // namespace fitwave
