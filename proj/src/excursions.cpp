#include "fitwave/excursions.hpp"

#include <algorithm>
#include <stdexcept>

namespace fitwave {

int ExcursionDecomposition::count_at(double t) const {
    auto it = std::upper_bound(surge_start.begin(), surge_start.end(), t);
    return int(it - surge_start.begin());
}

void ExcursionTracker::update(double t, std::int64_t width, std::int64_t front) {
    if (!started_) {
        started_ = true;
        out_.calm_start.push_back(0.0);
    }
    if (in_surge_) {
        // The interval is closed on the right: the front value at the
        // closing instant still counts toward the gain.
        sup_gain_ = std::max(sup_gain_, front - front_at_surge_);
        if (width < calm_level_) {
            out_.gain.push_back(sup_gain_);
            out_.calm_start.push_back(t);
            in_surge_ = false;
        }
    } else if (width >= surge_level_) {
        out_.surge_start.push_back(t);
        out_.width_at_surge.push_back(width);
        front_at_surge_ = front;
        sup_gain_ = 0;
        in_surge_ = true;
    }
}

ExcursionDecomposition ExcursionTracker::finish(double) {
    if (in_surge_) {
        out_.truncated_last = true;
        out_.open_surge_start = out_.surge_start.back();
        out_.open_gain = sup_gain_;
        in_surge_ = false;
    }
    return out_;
}

ExcursionDecomposition decompose_excursions(const StepSeries& width, const StepSeries& front,
                                            const Scales& scales) {
    if (width.t.size() != front.t.size())
        throw std::invalid_argument("decompose_excursions: series lengths differ");
    if (width.t.empty()) throw std::invalid_argument("decompose_excursions: empty series");
    ExcursionTracker tracker(scales);
    for (std::size_t i = 0; i < width.t.size(); ++i) {
        if (width.t[i] != front.t[i])
            throw std::invalid_argument("decompose_excursions: series time index differs");
        tracker.update(width.t[i], width.v[i], front.v[i]);
    }
    return tracker.finish(width.t.back());
}

} // namespace fitwave
