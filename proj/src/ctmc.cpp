#include "fitwave/ctmc.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "fitwave/ode.hpp"

namespace fitwave {

namespace {

using State = std::vector<std::int64_t>; // sorted fitness multiset

std::uint64_t encode(const State& s, std::int64_t radius) {
    std::uint64_t key = 0;
    for (std::int64_t v : s) key = key * (2 * (std::uint64_t)radius + 2) + (std::uint64_t)(v + radius);
    return key;
}

void enumerate_states(State& current, int slots, std::int64_t radius, std::int64_t min_value,
                      std::vector<State>& out) {
    if (slots == 0) {
        out.push_back(current);
        return;
    }
    for (std::int64_t v = min_value; v <= radius; ++v) {
        current.push_back(v);
        enumerate_states(current, slots - 1, radius, v, out);
        current.pop_back();
    }
}

} // namespace

CtmcResult ctmc_mean_fitness(const Params& params, std::int64_t radius, double t, double tol) {
    params.validate();
    if (params.n > 4) throw std::invalid_argument("ctmc oracle supports n <= 4");
    if (radius < 1) throw std::invalid_argument("ctmc oracle requires radius >= 1");

    // Multiset count C(2R + n, n), checked before enumerating anything.
    double predicted = 1.0;
    for (int i = 1; i <= params.n; ++i)
        predicted *= double(2 * radius + i) / double(i);
    if (predicted > 100'000.0)
        throw std::invalid_argument("ctmc oracle state count exceeds 1e5");

    std::vector<State> states;
    {
        State scratch;
        enumerate_states(scratch, params.n, radius, -radius, states);
    }

    std::map<std::uint64_t, std::uint32_t> index;
    for (std::uint32_t i = 0; i < states.size(); ++i) index[encode(states[i], radius)] = i;

    const std::uint32_t escape = (std::uint32_t)states.size();
    const int n = params.n;

    // Sparse generator rows: per state, a list of (target, rate).
    std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(states.size());
    std::vector<double> exit_rate(states.size(), 0.0);

    State scratch;
    for (std::uint32_t s = 0; s < states.size(); ++s) {
        const State& st = states[s];
        std::map<std::uint32_t, double> targets;
        auto add = [&](const State& sorted_target, double rate) {
            std::uint32_t tgt;
            if (sorted_target.front() < -radius || sorted_target.back() > radius) {
                tgt = escape;
            } else {
                tgt = index.at(encode(sorted_target, radius));
            }
            if (tgt != s) targets[tgt] += rate;
        };
        auto with_slot_value = [&](int slot, std::int64_t value) -> const State& {
            scratch = st;
            scratch[slot] = value;
            std::sort(scratch.begin(), scratch.end());
            return scratch;
        };

        for (int a = 0; a < n; ++a) {
            add(with_slot_value(a, st[a] + 1), params.q * params.mu);
            add(with_slot_value(a, st[a] - 1), (1.0 - params.q) * params.mu);
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                const double gap = double(st[a] - st[b]);
                double rate = 1.0 / n; // resampling, ordered pair
                if (gap > 0) rate += params.gamma * gap / n;
                add(with_slot_value(b, st[a]), rate);
            }
        }
        for (const auto& [tgt, rate] : targets) {
            rows[s].push_back({tgt, rate});
            exit_rate[s] += rate;
        }
    }

    // Forward equation p' = Q^T p over live states plus the escape slot.
    std::vector<double> p(states.size() + 1, 0.0);
    p[index.at(encode(State(n, 0), radius))] = 1.0;

    auto rhs = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
        std::fill(dy.begin(), dy.end(), 0.0);
        for (std::uint32_t s = 0; s < rows.size(); ++s) {
            const double mass = y[s];
            if (mass == 0.0) continue;
            dy[s] -= exit_rate[s] * mass;
            for (const auto& [tgt, rate] : rows[s]) dy[tgt] += rate * mass;
        }
    };
    ode::integrate(rhs, p, 0.0, t, tol, tol * 1e-2);

    CtmcResult result;
    result.state_count = states.size();
    result.leakage = std::max(0.0, p[escape]);
    for (std::uint32_t s = 0; s < states.size(); ++s) {
        double mean = 0.0;
        for (std::int64_t v : states[s]) mean += double(v);
        result.mean_fitness += p[s] * mean / double(n);
    }
    return result;
}

} // namespace fitwave
