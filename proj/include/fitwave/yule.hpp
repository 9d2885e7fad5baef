#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fitwave/params.hpp"
#include "fitwave/rng.hpp"

namespace fitwave {

// Branch laws for the multi-type pure-birth processes. Particles advance
// type i -> i+1 at rate mu; a particle branches at a rate set by the law and
// the new particle copies the parent's type.
struct ConstantBranch {
    double rate = 1.0;
};
struct TypeLinearBranch { // rate gamma * type + 1
    double gamma = 1.0;
};
using BranchLaw = std::variant<ConstantBranch, TypeLinearBranch>;

double branch_rate(const BranchLaw& law, std::int64_t type);

struct YuleResult {
    std::int64_t max_offset = 0; // max type minus starting type
    std::uint64_t population = 0;
};

struct YuleCapError : std::runtime_error {
    YuleCapError(std::uint64_t cap, double time_reached)
        : std::runtime_error("particle cap of " + std::to_string(cap) +
                             " exceeded at process time " + std::to_string(time_reached)),
          cap(cap),
          time_reached(time_reached) {}
    std::uint64_t cap;
    double time_reached;
};

inline constexpr std::uint64_t kDefaultParticleCap = 1'000'000;

// Exact simulation by competing exponentials over the type census. Same-type
// particles are exchangeable, so the census carries the full law of the
// max type and the population count.
YuleResult simulate_yule(std::int64_t start_type, std::uint64_t n0, const BranchLaw& law,
                         double mu, double t_end, std::uint64_t cap, Rng& rng);

// Exact law of the max type offset at a fixed time, via the first-passage
// (barrier-avoidance) equations of the branching process: for barrier m,
//   u_j' = -(b_j + mu) u_j + b_j u_j^2 + mu u_{j+1},  u_j(0) = 1, u_m == 0,
// where u_j is the probability that the subtree of one particle at offset j
// never reaches offset m; P(M_t >= m) = 1 - u_0(t)^{n0}. Returns tail[m] =
// P(M_t >= m) for m = 0.. until the tail drops below tail_eps. This route
// covers regimes where the particle population is astronomically large.
std::vector<double> max_offset_tail(std::int64_t start_type, std::uint64_t n0,
                                    const BranchLaw& law, double mu, double t,
                                    double tail_eps = 1e-13);

double mean_from_tail(const std::vector<double>& tail);
std::int64_t sample_from_tail(const std::vector<double>& tail, Rng& rng);

// Running front of i.i.d. type-linear blocks of duration time_scale, each
// restarted with n particles at the width-scale type. front[i] is the front
// displacement at time i * time_scale; blocks are sampled exactly in law
// from the first-passage distribution.
struct FrontPath {
    double block_length = 0.0;
    std::vector<std::int64_t> front; // front[0] = 0

    std::int64_t at_block(std::size_t i) const { return front.at(i); }
};

FrontPath restarted_front(const Params& params, const Scales& scales, double t_end, Rng& rng);

// Same process from a precomputed block distribution; callers drawing many
// paths at fixed parameters prepare the tail once.
FrontPath restarted_front(const std::vector<double>& block_tail, double block_length, double t_end,
                          Rng& rng);

} // namespace fitwave
