#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fitwave/params.hpp"

namespace fitwave {

// Flat INI-style configuration: [section] headers, key = value lines, '#'
// comments. Unknown sections or keys are errors, listed by name, so a typo
// never silently falls back to a default.
struct RunConfig {
    // [model]
    Params model;

    // [scales] — named preset times a positive multiplier.
    std::string w_preset = "sqrt_loglog"; // sqrt_loglog | cbrt_loglog | const_one
    double w_scale = 1.0;

    // [run]
    double t_end = 1.0;
    bool t_end_set = false;
    std::size_t replicates = 1000;
    std::uint64_t seed = 1;
    std::size_t grid_points = 0;
    std::uint64_t particle_cap = 1'000'000;
    std::uint64_t event_cap = 10'000'000'000ull;
    int workers = 0; // 0 = FITWAVE_WORKERS env or OpenMP default

    // [experiment]
    std::vector<int> n_grid;
    std::string profile = "two_point_balanced";
    std::int64_t w0 = 0; // 0 = width_scale
    bool labels = false;
    std::int64_t set_threshold = 0;
    bool track_set = false;
    int k = 3;
    std::int64_t oracle_radius = 6;

    // [output]
    std::string out_dir = "out";
    bool write_csv = true;
    bool write_json = true;

    double w_value(int n) const;
    Scales scales_for(int n) const { return Scales::from(n, w_value(n)); }
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

} // namespace fitwave
