#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "fitwave/labels.hpp"
#include "fitwave/moran.hpp"
#include "fitwave/tracked_set.hpp"

namespace fitwave {

struct RecorderSpec {
    std::size_t grid_points = 0; // extra uniform samples over [0, t_end]; 0 disables
    bool track_labels = false;
    bool track_set = false;
    std::int64_t set_threshold = 0;
    std::uint64_t max_events = kDefaultEventCap;
};

struct TrajectoryRow {
    double t = 0.0;
    std::int64_t xmax = 0;
    std::int64_t xmin = 0;
    double xbar = 0.0;
    std::int64_t width = 0;
    std::array<int, 3> primary_tally{};
    std::array<int, 3> secondary_tally{};
};

// Piecewise-constant step function sampled at event times.
struct StepSeries {
    std::vector<double> t;
    std::vector<std::int64_t> v;

    std::int64_t at(double time) const; // last value carried forward
};

struct Trajectory {
    std::vector<TrajectoryRow> rows; // one row per change of any recorded quantity
    bool has_labels = false;
    GuardBreach breaches;
    std::optional<int> final_set_count;
    std::uint64_t event_count = 0;
    double t_end = 0.0;

    StepSeries width_series() const;
    StepSeries front_series() const; // xmax - xmax(0)

    // Uniform-grid view; the jump process is exact under last-value-carried-
    // forward interpolation.
    std::vector<TrajectoryRow> grid(std::size_t points) const;
};

Trajectory run_trajectory(const Params& params, const Population& initial, double t_end,
                          const RecorderSpec& spec, Rng& rng);

} // namespace fitwave
