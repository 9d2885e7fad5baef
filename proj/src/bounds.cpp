#include "fitwave/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace fitwave {

namespace {

Bound from_log(double log_value) {
    Bound b;
    b.raw = std::exp(log_value);
    b.prob = std::min(b.raw, 1.0);
    return b;
}

// log(base^l / l!) handling base == 0 (returns -inf for l > 0, 0 for l == 0).
double log_power_over_factorial(double base, std::uint64_t l) {
    if (l == 0) return 0.0;
    if (base <= 0.0) return -HUGE_VAL;
    return double(l) * std::log(base) - std::lgamma(double(l) + 1.0);
}

} // namespace

Bound exp_series_tail_bound(double x, std::uint64_t k) {
    if (x < 0) throw std::invalid_argument("exp_series_tail_bound: x must be >= 0");
    return from_log(log_power_over_factorial(x, k) + x);
}

Bound yule_max_tail_bound(double n0, double t, double mu, double c, std::uint64_t l) {
    return from_log(std::log(n0) + log_power_over_factorial(t * mu, l) + c * t);
}

Bound type_linear_max_tail_bound(double n0, double t, double mu, double gamma, std::int64_t k,
                                 std::uint64_t l) {
    const double rate_cap = gamma * double(k + (std::int64_t)l) + 1.0;
    return from_log(std::log(n0) + log_power_over_factorial(t * mu, l) + rate_cap * t);
}

Bound min_drop_tail_bound(double n, double t, double mu, std::uint64_t l) {
    return from_log(std::log(n) + log_power_over_factorial(t * mu, l) + t);
}

Bound front_rise_tail_bound(double n, double t, double mu, double gamma, std::int64_t w0,
                            std::uint64_t l) {
    if (l < 1) throw std::invalid_argument("front_rise_tail_bound: l must be >= 1");
    const double exponent = (gamma * double(w0 + 2 * (std::int64_t)l) + mu + 1.0) * t;
    return from_log(std::log(2.0 * n) + double(l) * ((t * mu > 0) ? std::log(t * mu) : -HUGE_VAL) -
                    std::lgamma(double(l)) + exponent);
}

ContractionConstants contraction_constants(const Params& params, const Scales& scales,
                                           std::int64_t w0) {
    if (w0 > scales.width_scale)
        throw std::invalid_argument("contraction_constants: requires w0 <= width_scale");
    const auto l = (std::uint64_t)(scales.width_scale / 2);
    if (l < 1) throw std::invalid_argument("contraction_constants: requires width_scale >= 2");
    ContractionConstants c;
    c.k1 = front_rise_tail_bound(params.n, scales.time_scale, params.mu, params.gamma, w0, l).raw;
    c.k2 = min_drop_tail_bound(params.n, scales.time_scale, params.mu, l).raw;
    c.p = 1.0 - c.k1 - c.k2;
    c.hold_probability = std::min(std::max(c.p, 0.0), 1.0);
    return c;
}

double width_stability_lower(const Params& params, const Scales& scales, std::int64_t w0) {
    return contraction_constants(params, scales, w0).p;
}

double rate_envelope(double n, double c) {
    const double lln = std::log(std::log(n));
    return c * std::log(n) / (lln * lln);
}

} // namespace fitwave
