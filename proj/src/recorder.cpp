#include "fitwave/recorder.hpp"

#include <algorithm>

namespace fitwave {

std::int64_t StepSeries::at(double time) const {
    auto it = std::upper_bound(t.begin(), t.end(), time);
    if (it == t.begin()) return v.front();
    return v[std::size_t(it - t.begin()) - 1];
}

StepSeries Trajectory::width_series() const {
    StepSeries s;
    s.t.reserve(rows.size());
    s.v.reserve(rows.size());
    for (const auto& r : rows) {
        s.t.push_back(r.t);
        s.v.push_back(r.width);
    }
    return s;
}

StepSeries Trajectory::front_series() const {
    StepSeries s;
    s.t.reserve(rows.size());
    s.v.reserve(rows.size());
    const std::int64_t top0 = rows.front().xmax;
    for (const auto& r : rows) {
        s.t.push_back(r.t);
        s.v.push_back(r.xmax - top0);
    }
    return s;
}

std::vector<TrajectoryRow> Trajectory::grid(std::size_t points) const {
    std::vector<TrajectoryRow> out;
    if (points == 0 || rows.empty()) return out;
    out.reserve(points + 1);
    std::size_t k = 0;
    for (std::size_t g = 0; g <= points; ++g) {
        const double t = t_end * double(g) / double(points);
        while (k + 1 < rows.size() && rows[k + 1].t <= t) ++k;
        TrajectoryRow row = rows[k];
        row.t = t;
        out.push_back(row);
    }
    return out;
}

namespace {

TrajectoryRow snapshot(const Population& pop, const LabelState* labels) {
    TrajectoryRow row;
    row.t = pop.time();
    row.xmax = pop.max_fitness();
    row.xmin = pop.min_fitness();
    row.xbar = pop.mean_fitness();
    row.width = pop.width();
    if (labels) {
        row.primary_tally = labels->primary_tally();
        row.secondary_tally = labels->secondary_tally();
    }
    return row;
}

bool same_observables(const TrajectoryRow& a, const TrajectoryRow& b) {
    return a.xmax == b.xmax && a.xmin == b.xmin && a.xbar == b.xbar && a.width == b.width &&
           a.primary_tally == b.primary_tally && a.secondary_tally == b.secondary_tally;
}

} // namespace

Trajectory run_trajectory(const Params& params, const Population& initial, double t_end,
                          const RecorderSpec& spec, Rng& rng) {
    params.validate();
    if (t_end < 0) throw std::invalid_argument("t_end must be >= 0");

    Population pop = initial;
    std::optional<LabelState> labels;
    if (spec.track_labels) labels = LabelState::from_population(pop);
    std::optional<TrackedSet> tracked;
    if (spec.track_set) tracked = TrackedSet::from_population(pop, spec.set_threshold);

    Trajectory traj;
    traj.t_end = t_end;
    traj.has_labels = spec.track_labels;
    traj.rows.push_back(snapshot(pop, labels ? &*labels : nullptr));

    if (t_end > 0) {
        traj.event_count = simulate(
            params, pop, t_end, rng, spec.max_events,
            [&](const Event& ev, const StepInfo& info, const Population& p) {
                if (labels) labels->apply(ev, info);
                if (tracked) tracked->apply(ev, info);
                TrajectoryRow row = snapshot(p, labels ? &*labels : nullptr);
                if (!same_observables(traj.rows.back(), row)) traj.rows.push_back(row);
            });
    }
    if (labels) traj.breaches = labels->breaches();
    if (tracked) traj.final_set_count = tracked->count();
    return traj;
}

} // namespace fitwave
