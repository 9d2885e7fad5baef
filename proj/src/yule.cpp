#include "fitwave/yule.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fitwave/ode.hpp"

namespace fitwave {

double branch_rate(const BranchLaw& law, std::int64_t type) {
    if (const auto* c = std::get_if<ConstantBranch>(&law)) return c->rate;
    return std::get<TypeLinearBranch>(law).gamma * double(type) + 1.0;
}

YuleResult simulate_yule(std::int64_t start_type, std::uint64_t n0, const BranchLaw& law,
                         double mu, double t_end, std::uint64_t cap, Rng& rng) {
    if (n0 == 0) throw std::invalid_argument("simulate_yule: n0 must be positive");
    if (t_end < 0) throw std::invalid_argument("simulate_yule: t_end must be >= 0");
    if (mu < 0) throw std::invalid_argument("simulate_yule: mu must be >= 0");

    std::map<std::int64_t, std::uint64_t> census;
    census[start_type] = n0;
    std::uint64_t population = n0;
    std::int64_t max_type = start_type;
    double t = 0.0;

    while (true) {
        double branch_total = 0.0;
        for (const auto& [type, count] : census) branch_total += double(count) * branch_rate(law, type);
        const double advance_total = mu * double(population);
        const double total = branch_total + advance_total;
        if (total <= 0.0) break;

        t += rng.exponential(total);
        if (t > t_end) break;

        if (rng.uniform() * total < branch_total) {
            double pick = rng.uniform() * branch_total;
            for (auto& [type, count] : census) {
                const double w = double(count) * branch_rate(law, type);
                if (pick < w) {
                    ++count;
                    break;
                }
                pick -= w;
            }
            if (++population > cap) throw YuleCapError(cap, t);
        } else {
            std::uint64_t pick = rng.below(population);
            for (auto it = census.begin(); it != census.end(); ++it) {
                if (pick < it->second) {
                    const std::int64_t type = it->first;
                    if (--it->second == 0) census.erase(it);
                    ++census[type + 1];
                    max_type = std::max(max_type, type + 1);
                    break;
                }
                pick -= it->second;
            }
        }
    }
    return {max_type - start_type, population};
}

std::vector<double> max_offset_tail(std::int64_t start_type, std::uint64_t n0,
                                    const BranchLaw& law, double mu, double t,
                                    double tail_eps) {
    if (n0 == 0) throw std::invalid_argument("max_offset_tail: n0 must be positive");
    std::vector<double> tail{1.0};
    if (t <= 0 || mu <= 0) return tail; // types frozen at the start type

    const int max_barrier = 4096;
    for (int barrier = 1; barrier <= max_barrier; ++barrier) {
        // u[j], j = 0..barrier-1: avoidance probability for one particle at
        // offset j; offset barrier is absorbing failure (u == 0).
        std::vector<double> u(barrier, 1.0);
        auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
            for (int j = 0; j < barrier; ++j) {
                const double b = branch_rate(law, start_type + j);
                const double up = (j + 1 < barrier) ? y[j + 1] : 0.0;
                dy[j] = -(b + mu) * y[j] + b * y[j] * y[j] + mu * up;
            }
        };
        ode::integrate(rhs, u, 0.0, t, 1e-11, 1e-14);
        const double u0 = std::clamp(u[0], 0.0, 1.0);
        // 1 - u0^n0 without cancellation for u0 near 1.
        const double p = -std::expm1(double(n0) * std::log(std::max(u0, 1e-300)));
        tail.push_back(std::clamp(p, 0.0, 1.0));
        if (tail.back() < tail_eps) return tail;
    }
    throw std::runtime_error("max_offset_tail: barrier limit exceeded");
}

double mean_from_tail(const std::vector<double>& tail) {
    double mean = 0.0;
    for (std::size_t m = 1; m < tail.size(); ++m) mean += tail[m];
    return mean;
}

std::int64_t sample_from_tail(const std::vector<double>& tail, Rng& rng) {
    const double u = rng.uniform();
    // M >= m iff u < tail[m]; the sampled value is the largest such m.
    std::int64_t m = 0;
    while (m + 1 < (std::int64_t)tail.size() && u < tail[m + 1]) ++m;
    return m;
}

FrontPath restarted_front(const std::vector<double>& block_tail, double block_length, double t_end,
                          Rng& rng) {
    if (!(t_end > 0)) throw std::invalid_argument("restarted_front: t_end must be > 0");
    FrontPath path;
    path.block_length = block_length;
    const auto blocks = (std::size_t)std::ceil(t_end / block_length - 1e-12);
    path.front.reserve(blocks + 1);
    path.front.push_back(0);
    for (std::size_t i = 0; i < blocks; ++i)
        path.front.push_back(path.front.back() + sample_from_tail(block_tail, rng));
    return path;
}

FrontPath restarted_front(const Params& params, const Scales& scales, double t_end, Rng& rng) {
    const auto tail = max_offset_tail(scales.width_scale, (std::uint64_t)params.n,
                                      TypeLinearBranch{params.gamma}, params.mu,
                                      scales.time_scale);
    return restarted_front(tail, scales.time_scale, t_end, rng);
}

} // namespace fitwave
