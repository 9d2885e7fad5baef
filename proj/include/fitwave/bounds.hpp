#pragma once

#include <cstdint>

#include "fitwave/params.hpp"

namespace fitwave {

// Closed-form tail bounds, evaluated in log space. `raw` is the formula
// value, which may exceed 1; `prob` is the [0,1] clamp used whenever the
// value is compared against an empirical probability.
struct Bound {
    double raw = 0.0;
    double prob = 0.0;
};

// x^k e^x / k!  — dominates the exponential series tail sum_{i>=k} x^i / i!.
Bound exp_series_tail_bound(double x, std::uint64_t k);

// n0 (t mu)^l e^{c t} / l!  — tail of the max type offset of a constant-rate
// branching process with n0 starting particles.
Bound yule_max_tail_bound(double n0, double t, double mu, double c, std::uint64_t l);

// n0 (t mu)^l e^{(gamma (k + l) + 1) t} / l!  — same for the type-linear law
// started at type k.
Bound type_linear_max_tail_bound(double n0, double t, double mu, double gamma, std::int64_t k,
                                 std::uint64_t l);

// n (t mu)^l e^t / l!  — tail of the running drop of the minimum fitness
// below its starting value.
Bound min_drop_tail_bound(double n, double t, double mu, std::uint64_t l);

// 2 n (t mu)^l e^{(gamma (w0 + 2l) + mu + 1) t} / (l-1)!  — tail of the
// running rise of the maximum fitness above its starting value; requires
// l >= 1. The same expression bounds the tracked-set drop events.
Bound front_rise_tail_bound(double n, double t, double mu, double gamma, std::int64_t w0,
                            std::uint64_t l);

// Width-contraction constants at l = floor(width_scale / 2), t = time_scale:
// k1 = front-rise bound, k2 = min-drop bound, p = 1 - k1 - k2 (may be
// negative at small N; hold_probability clamps to [0,1]).
struct ContractionConstants {
    double k1 = 0.0;
    double k2 = 0.0;
    double p = 0.0;
    double hold_probability = 0.0;
};

// Requires w0 <= scales.width_scale and width_scale >= 2.
ContractionConstants contraction_constants(const Params& params, const Scales& scales,
                                           std::int64_t w0);

// Lower bound on P(width stays <= 2 * width_scale over one time_scale).
double width_stability_lower(const Params& params, const Scales& scales, std::int64_t w0);

// c * ln N / (ln ln N)^2 — the adaptation-rate envelope.
double rate_envelope(double n, double c);

} // namespace fitwave
