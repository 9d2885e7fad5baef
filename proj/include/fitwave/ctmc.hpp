#pragma once

#include <cstdint>

#include "fitwave/params.hpp"

namespace fitwave {

// Exact transient solution of the model at tiny N: enumerates all unordered
// fitness multisets within [-radius, radius], builds the generator from the
// mutation / resampling / selection rates, and integrates the forward
// equation from the all-zero state. Transitions that would leave the box are
// routed to an absorbing escape state; `leakage` is its mass at time t and
// bounds the truncation error of the reported mean (escaped mass contributes
// zero). Throws when n > 4 or the state count exceeds 1e5.
struct CtmcResult {
    double mean_fitness = 0.0;
    double leakage = 0.0;
    std::size_t state_count = 0;
};

CtmcResult ctmc_mean_fitness(const Params& params, std::int64_t radius, double t,
                             double tol = 1e-10);

} // namespace fitwave
