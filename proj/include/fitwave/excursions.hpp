#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fitwave/params.hpp"
#include "fitwave/recorder.hpp"

namespace fitwave {

// Alternating first-crossing decomposition of a width path:
//   calm_start[0] = 0; surge_start[i] = first t >= calm_start[i] with
//   width >= 2 * width_scale; calm_start[i+1] = first t >= surge_start[i]
//   with width < width_scale. gain[i] is the largest front displacement over
//   [surge_start[i], calm_start[i+1]].
struct ExcursionDecomposition {
    std::vector<double> calm_start;
    std::vector<double> surge_start;
    std::vector<std::int64_t> gain;             // complete excursions only
    std::vector<std::int64_t> width_at_surge;   // width at each surge start
    bool truncated_last = false;                // an open excursion was cut off
    std::optional<double> open_surge_start;
    std::int64_t open_gain = 0;

    // Number of surge starts at or before t.
    int count_at(double t) const;
};

// Both series must share piecewise-constant semantics; throws on mismatched
// or empty inputs.
ExcursionDecomposition decompose_excursions(const StepSeries& width, const StepSeries& front,
                                            const Scales& scales);

// Online flavor of the same scan, fed one event at a time; used where
// trajectories are too long to record. Feed every width/front change through
// update() and call finish(t_end) once.
class ExcursionTracker {
public:
    explicit ExcursionTracker(const Scales& scales)
        : surge_level_(2 * scales.width_scale), calm_level_(scales.width_scale) {}

    void start(double t, std::int64_t width, std::int64_t front) { update(t, width, front); }
    void update(double t, std::int64_t width, std::int64_t front);
    ExcursionDecomposition finish(double t_end);

    // Progress so far, open excursion not folded in.
    const ExcursionDecomposition& progress() const { return out_; }

private:
    std::int64_t surge_level_;
    std::int64_t calm_level_;
    bool in_surge_ = false;
    std::int64_t front_at_surge_ = 0;
    std::int64_t sup_gain_ = 0;
    ExcursionDecomposition out_;
    bool started_ = false;
};

} // namespace fitwave
