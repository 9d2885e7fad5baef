#include "fitwave/app.hpp"

#include <cmath>

#include "fitwave/bounds.hpp"
#include "fitwave/ctmc.hpp"
#include "fitwave/experiments.hpp"
#include "fitwave/moran.hpp"
#include "fitwave/parallel.hpp"
#include "fitwave/recorder.hpp"
#include "fitwave/stats.hpp"
#include "fitwave/version.hpp"

namespace fitwave::app {

using nlohmann::json;

namespace {

json manifest(const std::string& subcommand, const RunConfig& cfg) {
    json m;
    m["version"] = FITWAVE_VERSION;
    m["schema_version"] = FITWAVE_SCHEMA_VERSION;
    m["subcommand"] = subcommand;
    m["model"] = {{"n", cfg.model.n}, {"mu", cfg.model.mu}, {"q", cfg.model.q}, {"gamma", cfg.model.gamma}};
    m["scales"] = {{"w_preset", cfg.w_preset}, {"w_scale", cfg.w_scale}};
    if (cfg.model.n >= 16) {
        const Scales s = cfg.scales_for(cfg.model.n);
        m["scales"]["w"] = s.w;
        m["scales"]["width_scale"] = s.width_scale;
        m["scales"]["time_scale"] = s.time_scale;
    }
    m["run"] = {{"t_end", cfg.t_end},   {"replicates", cfg.replicates}, {"seed", cfg.seed},
                {"grid_points", cfg.grid_points}, {"particle_cap", cfg.particle_cap},
                {"event_cap", cfg.event_cap},     {"workers", cfg.workers}};
    m["seed_derivation"] = "replicate i uses xoshiro256++ seeded with splitmix64(splitmix64(seed) xor (i+1))";
    return m;
}

json estimate_json(const Estimate& e) {
    return {{"mean", e.mean}, {"se", e.se}, {"n", e.n}, {"lo95", e.lo95}, {"hi95", e.hi95}};
}

void fail(CommandResult& result, const std::string& what) {
    result.pass = false;
    result.summary["failures"].push_back(what);
}

Estimate mc_mean_fitness(const Params& params, double t, std::size_t reps, std::uint64_t seed,
                         int workers) {
    std::vector<double> values(reps);
    for_each_replicate(reps, workers, [&](std::size_t i) {
        Rng rng = replicate_rng(seed, i);
        Population pop = Population::constant(params.n, 0);
        simulate(params, pop, t, rng, [](const Event&, const StepInfo&, const Population&) {});
        values[i] = pop.mean_fitness();
    });
    return estimate_from(values);
}

CommandResult cmd_simulate(const RunConfig& cfg) {
    CommandResult result;
    result.name = "simulate";
    Rng rng(cfg.seed);
    RecorderSpec spec;
    spec.grid_points = cfg.grid_points;
    spec.track_labels = cfg.labels;
    spec.track_set = cfg.track_set;
    spec.set_threshold = cfg.set_threshold;
    spec.max_events = cfg.event_cap;
    const Population initial = Population::constant(cfg.model.n, 0);
    const Trajectory traj = run_trajectory(cfg.model, initial, cfg.t_end, spec, rng);

    result.table.header = {"t", "xmax", "xmin", "xbar", "width"};
    if (traj.has_labels)
        for (const char* c : {"bottom", "middle", "top", "bottom2", "middle2", "top2"})
            result.table.header.push_back(c);
    const auto rows = cfg.grid_points > 0 ? traj.grid(cfg.grid_points) : traj.rows;
    for (const auto& r : rows) {
        std::vector<std::string> cells{format_double(r.t), std::to_string(r.xmax),
                                       std::to_string(r.xmin), format_double(r.xbar),
                                       std::to_string(r.width)};
        if (traj.has_labels) {
            for (int v : r.primary_tally) cells.push_back(std::to_string(v));
            for (int v : r.secondary_tally) cells.push_back(std::to_string(v));
        }
        result.table.add_row(std::move(cells));
    }

    result.summary = manifest("simulate", cfg);
    result.summary["events"] = traj.event_count;
    result.summary["rows"] = result.table.rows.size();
    result.summary["final"] = {{"t", traj.t_end},
                               {"xmax", traj.rows.back().xmax},
                               {"xmin", traj.rows.back().xmin},
                               {"xbar", traj.rows.back().xbar},
                               {"width", traj.rows.back().width}};
    if (traj.has_labels)
        result.summary["guard_breach"] = {{"primary_mid", traj.breaches.primary_mid},
                                          {"primary_top", traj.breaches.primary_top},
                                          {"secondary_mid", traj.breaches.secondary_mid},
                                          {"secondary_top", traj.breaches.secondary_top}};
    if (traj.final_set_count) result.summary["tracked_set_count"] = *traj.final_set_count;
    result.summary["failures"] = json::array();
    return result;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
    CommandResult result;
    result.name = "sweep";
    const std::vector<int> grid =
        cfg.n_grid.empty() ? std::vector<int>{100, 1000, 10000, 100000} : cfg.n_grid;
    const SweepResult sweep = rate_sweep(grid, cfg.model, cfg.replicates, cfg.seed, cfg.workers);

    result.table.header = {"n", "t", "rate", "se", "envelope", "ratio"};
    for (const auto& row : sweep.rows)
        result.table.add_row({std::to_string(row.n), format_double(row.t),
                              format_double(row.rate.mean), format_double(row.rate.se),
                              format_double(row.envelope), format_double(row.ratio)});

    result.summary = manifest("sweep", cfg);
    result.summary["failures"] = json::array();
    result.summary["fitted_c"] = sweep.fitted_c;
    result.summary["ratio_spread"] = sweep.ratio_spread;
    result.summary["nondecreasing"] = sweep.nondecreasing;
    result.summary["ratio_bounded"] = sweep.ratio_bounded;
    if (!sweep.nondecreasing) fail(result, "rate estimates decrease beyond 3*pooled SE");
    if (!sweep.ratio_bounded) fail(result, "rate/envelope ratio spread exceeds 4");
    return result;
}

CommandResult cmd_couple_check(const RunConfig& cfg) {
    CommandResult result;
    result.name = "couple-check";
    const auto rows = couple_checks(cfg.replicates, cfg.seed, cfg.workers);
    result.table.header = {"driver", "n", "k", "t", "runs", "dominance_violations",
                           "welldef_violations", "stopped_runs"};
    std::uint64_t total = 0;
    for (const auto& r : rows) {
        result.table.add_row({r.driver, std::to_string(r.n), std::to_string(r.k),
                              format_double(r.t), std::to_string(r.runs),
                              std::to_string(r.dominance_violations),
                              std::to_string(r.welldef_violations), std::to_string(r.stopped_runs)});
        total += r.dominance_violations + r.welldef_violations;
    }
    result.summary = manifest("couple-check", cfg);
    result.summary["failures"] = json::array();
    result.summary["total_violations"] = total;
    if (total != 0) fail(result, "coupling dominance/well-definedness violations observed");
    return result;
}

CommandResult cmd_tail_check(const RunConfig& cfg) {
    CommandResult result;
    result.name = "tail-check";
    const auto rows = tail_checks(cfg.replicates, cfg.seed, cfg.workers);
    result.summary = manifest("tail-check", cfg);
    result.summary["failures"] = json::array();
    result.summary["rows"] = rows.size();
    result.table.header = {"family", "config", "l", "empirical", "se", "bound", "pass"};
    for (const auto& r : rows) {
        result.table.add_row({r.family, r.config, std::to_string(r.l),
                              format_double(r.empirical.mean), format_double(r.empirical.se),
                              format_double(r.bound), r.pass ? "1" : "0"});
        if (!r.pass)
            fail(result, r.family + " l=" + std::to_string(r.l) + " empirical tail above bound+3SE");
    }
    return result;
}

CommandResult cmd_width_exp(const RunConfig& cfg) {
    CommandResult result;
    result.name = "width-exp";
    const std::vector<int> grid =
        cfg.n_grid.empty() ? std::vector<int>{1000, 10000, 100000} : cfg.n_grid;
    const InitProfile profile = profile_from_name(cfg.profile);

    result.table.header = {"n",      "width_scale", "time_scale", "w0",          "collapse", "collapse_se",
                           "stable", "stable_se",   "breach",     "breach_se"};
    std::vector<WidthExperimentResult> results;
    std::uint64_t stream = 0;
    for (int n : grid) {
        Params params = cfg.model;
        params.n = n;
        const Scales scales = cfg.scales_for(n);
        const std::int64_t w0 = cfg.w0 > 0 ? cfg.w0 : scales.width_scale;
        const auto r = width_experiment(params, scales, profile, w0, cfg.replicates,
                                        splitmix64(cfg.seed) + stream++, cfg.workers);
        results.push_back(r);
        result.table.add_row({std::to_string(n), std::to_string(scales.width_scale),
                              format_double(scales.time_scale), std::to_string(w0),
                              format_double(r.collapse_within.mean),
                              format_double(r.collapse_within.se), format_double(r.escape_after.mean),
                              format_double(r.escape_after.se), format_double(r.breach_union.mean),
                              format_double(r.breach_union.se)});
    }

    result.summary = manifest("width-exp", cfg);
    result.summary["failures"] = json::array();
    for (std::size_t i = 0; i + 1 < results.size(); ++i) {
        const auto& a = results[i];
        const auto& b = results[i + 1];
        if (b.collapse_within.mean <
            a.collapse_within.mean - 3.0 * pooled_se(a.collapse_within.se, b.collapse_within.se))
            fail(result, "collapse probability decreases beyond slack");
        if (b.escape_after.mean <
            a.escape_after.mean - 3.0 * pooled_se(a.escape_after.se, b.escape_after.se))
            fail(result, "stability probability decreases beyond slack");
        if (b.breach_union.mean >
            a.breach_union.mean + 3.0 * pooled_se(a.breach_union.se, b.breach_union.se))
            fail(result, "guard-breach probability increases beyond slack");
    }
    return result;
}

CommandResult cmd_prop_check(const RunConfig& cfg) {
    CommandResult result;
    result.name = "prop-check";
    const Scales scales = cfg.scales_for(cfg.model.n);
    const std::size_t gain_reps = std::max<std::size_t>(cfg.replicates / 5, 100);
    const PropCheckReport report =
        check_prop_bounds(cfg.model, scales, cfg.replicates, gain_reps, cfg.seed, cfg.workers);

    result.table.header = {"check", "estimate", "se", "bound", "pass"};
    result.table.add_row({"first_gain_vs_5W",
                          report.gain_samples ? format_double(report.first_gain.mean) : "nan",
                          report.gain_samples ? format_double(report.first_gain.se) : "nan",
                          format_double(report.gain_bound),
                          report.gain_sufficient ? (report.gain_pass ? "1" : "0") : "insufficient"});
    result.table.add_row({"front_block_vs_6W", format_double(report.front_block_mean.mean),
                          format_double(report.front_block_mean.se),
                          format_double(report.front_bound), report.front_pass ? "1" : "0"});
    result.table.add_row({"count_rate_vs_1/T", format_double(report.count_rate.mean),
                          format_double(report.count_rate.se), format_double(report.count_bound),
                          report.count_pass ? "1" : "0"});
    result.table.add_row({"front_vs_decomposition", format_double(report.direct_front.mean),
                          format_double(report.decomp_slack),
                          format_double(report.front_plus_gains.mean),
                          report.decomp_pass ? "1" : "0"});

    result.summary = manifest("prop-check", cfg);
    result.summary["failures"] = json::array();
    result.summary["horizon"] = report.horizon;
    result.summary["first_gain"] = report.gain_samples ? estimate_json(report.first_gain) : json();
    result.summary["gain_samples"] = report.gain_samples;
    result.summary["gain_unresolved"] = report.gain_unresolved;
    result.summary["front_block"] = estimate_json(report.front_block_mean);
    result.summary["front_exact_mean"] = report.front_exact_mean;
    result.summary["count_rate"] = estimate_json(report.count_rate);
    result.summary["direct_front"] = estimate_json(report.direct_front);
    result.summary["front_plus_gains"] = estimate_json(report.front_plus_gains);
    if (report.gain_sufficient && !report.gain_pass) fail(result, "first excursion gain above 5W+3SE");
    if (!report.front_pass) fail(result, "restarted front block mean above 6W+3SE");
    if (!report.count_pass) fail(result, "excursion count rate above 1/T+3SE");
    if (!report.decomp_pass) fail(result, "front exceeds decomposition bound beyond slack");
    return result;
}

CommandResult cmd_oracle_check(const RunConfig& cfg) {
    CommandResult result;
    result.name = "oracle-check";
    Params params = cfg.model;
    const double t = cfg.t_end_set ? cfg.t_end : 1.0;
    const CtmcResult oracle = ctmc_mean_fitness(params, cfg.oracle_radius, t);
    const Estimate mc = mc_mean_fitness(params, t, cfg.replicates, cfg.seed, cfg.workers);
    const double diff = std::abs(mc.mean - oracle.mean_fitness);
    const bool pass = diff <= 3.0 * mc.se;

    result.table.header = {"t", "mc_mean", "mc_se", "oracle_mean", "leakage", "states", "pass"};
    result.table.add_row({format_double(t), format_double(mc.mean), format_double(mc.se),
                          format_double(oracle.mean_fitness), format_double(oracle.leakage),
                          std::to_string(oracle.state_count), pass ? "1" : "0"});

    result.summary = manifest("oracle-check", cfg);
    result.summary["failures"] = json::array();
    result.summary["mc"] = estimate_json(mc);
    result.summary["oracle_mean"] = oracle.mean_fitness;
    result.summary["leakage"] = oracle.leakage;
    result.summary["radius"] = cfg.oracle_radius;
    if (!pass) fail(result, "Monte Carlo mean differs from oracle by more than 3*SE");
    return result;
}

} // namespace

CommandResult run_command(const std::string& subcommand, const RunConfig& cfg) {
    cfg.model.validate();
    if (subcommand == "simulate") return cmd_simulate(cfg);
    if (subcommand == "sweep") return cmd_sweep(cfg);
    if (subcommand == "couple-check") return cmd_couple_check(cfg);
    if (subcommand == "tail-check") return cmd_tail_check(cfg);
    if (subcommand == "width-exp") return cmd_width_exp(cfg);
    if (subcommand == "prop-check") return cmd_prop_check(cfg);
    if (subcommand == "oracle-check") return cmd_oracle_check(cfg);
    throw std::invalid_argument("unknown subcommand: " + subcommand);
}

} // namespace fitwave::app
