#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fitwave/params.hpp"
#include "fitwave/population.hpp"
#include "fitwave/stats.hpp"

namespace fitwave {

// Initial-configuration builders for the width experiments, which quantify
// over starting configurations of a given width.
enum class InitProfile { AllZero, TwoPointBalanced, TwoPointExtreme, Ladder };
InitProfile profile_from_name(const std::string& name);
std::string profile_name(InitProfile profile);
Population build_profile(InitProfile profile, int n, std::int64_t w0);

// Horizon rule for the rate experiments: max(ln ln N, 5 * time_scale).
double theorem_time(int n, const Scales& scales);

// Replicate mean and standard error of mean_fitness(t) / t from the all-zero
// start. Replicate i derives its stream from (seed, i).
Estimate estimate_rate(const Params& params, double t, std::size_t reps, std::uint64_t seed,
                       int workers);

struct SweepRow {
    int n = 0;
    double t = 0.0;
    Estimate rate;
    double envelope = 0.0; // ln N / (ln ln N)^2
    double ratio = 0.0;    // rate / envelope
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double fitted_c = 0.0;      // least-squares constant through the origin
    double ratio_spread = 0.0;  // max ratio / min ratio over the grid
    bool nondecreasing = true;  // adjacent pairs within 3 * pooled SE
    bool ratio_bounded = true;  // ratio_spread < 4
};

SweepResult rate_sweep(const std::vector<int>& n_grid, const Params& base, std::size_t reps,
                       std::uint64_t seed, int workers);

// One batch of width-experiment replicates: runs over [0, time_scale] from
// the given profile and watches three things per replicate:
//  - collapse: the min fitness exceeds top0 - W0/4 (width contraction),
//  - escape: some fitness leaves [min0 - W0/4, top0 + W0/4] (width stability
//    is its complement),
//  - guard breach: any of the four label guard-line events.
struct WidthExperimentResult {
    Estimate collapse_within;
    Estimate escape_after;
    Estimate breach_union;
};

WidthExperimentResult width_experiment(const Params& params, const Scales& scales,
                                       InitProfile profile, std::int64_t w0, std::size_t reps,
                                       std::uint64_t seed, int workers);

// Desk-scale checks of the excursion propositions.
struct PropCheckReport {
    // Expected first-excursion front gain from a width-2W start vs 5 * W.
    Estimate first_gain;
    std::size_t gain_samples = 0;
    std::size_t gain_unresolved = 0;
    double gain_bound = 0.0;
    bool gain_sufficient = false; // at least 100 samples
    bool gain_pass = false;

    // Mean restarted-front displacement over one block vs 6 * W.
    Estimate front_block_mean;
    double front_exact_mean = 0.0;
    double front_bound = 0.0;
    bool front_pass = false;

    // Excursion counting rate E[N_s]/s vs 1/time_scale at s = 5 time_scale.
    Estimate count_rate;
    double count_bound = 0.0;
    bool count_pass = false;

    // Front displacement vs restarted front plus excursion gains, compared
    // in the mean at s = 5 time_scale across independent groups.
    Estimate direct_front;
    Estimate front_plus_gains;
    double decomp_slack = 0.0; // 3 * pooled SE
    bool decomp_pass = false;

    double horizon = 0.0;
};

PropCheckReport check_prop_bounds(const Params& params, const Scales& scales, std::size_t reps,
                                  std::size_t gain_reps, std::uint64_t seed, int workers);

// Empirical tails vs the closed-form bounds, one row per (family, l).
struct TailCheckRow {
    std::string family;
    std::string config;
    std::uint64_t l = 0;
    Estimate empirical;
    double bound = 0.0; // clamped to [0,1]
    bool pass = false;  // empirical mean <= bound + 3 * SE
};

std::vector<TailCheckRow> tail_checks(std::size_t reps, std::uint64_t seed, int workers);

// Coupled runs: violation tallies must be zero on every run.
struct CoupleCheckRow {
    std::string driver;
    int n = 0;
    int k = 0;
    double t = 0.0;
    std::size_t runs = 0;
    std::uint64_t dominance_violations = 0;
    std::uint64_t welldef_violations = 0;
    std::size_t stopped_runs = 0;
};

std::vector<CoupleCheckRow> couple_checks(std::size_t runs, std::uint64_t seed, int workers);

} // namespace fitwave
