#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fitwave::ode {

// Adaptive Dormand-Prince 5(4) integrator for y' = f(t, y). The derivative
// callback writes into a preallocated output vector: f(t, y, dy).
template <class F>
void integrate(F&& f, std::vector<double>& y, double t0, double t1, double rtol, double atol) {
    if (t1 <= t0) return;
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), y5(n);

    double t = t0;
    double h = (t1 - t0) / 64.0;
    f(t, y, k1); // k1 stays valid across rejected steps (y, t unchanged)

    const int max_steps = 20'000'000;
    for (int step = 0; step < max_steps; ++step) {
        if (t >= t1) return;
        h = std::min(h, t1 - t);

        auto stage = [&](std::vector<double>& out, std::initializer_list<std::pair<const std::vector<double>*, double>> terms) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                for (const auto& [v, c] : terms) acc += h * c * (*v)[i];
                out[i] = acc;
            }
        };

        stage(ytmp, {{&k1, 1.0 / 5}});
        f(t + h / 5, ytmp, k2);
        stage(ytmp, {{&k1, 3.0 / 40}, {&k2, 9.0 / 40}});
        f(t + 3 * h / 10, ytmp, k3);
        stage(ytmp, {{&k1, 44.0 / 45}, {&k2, -56.0 / 15}, {&k3, 32.0 / 9}});
        f(t + 4 * h / 5, ytmp, k4);
        stage(ytmp, {{&k1, 19372.0 / 6561}, {&k2, -25360.0 / 2187}, {&k3, 64448.0 / 6561}, {&k4, -212.0 / 729}});
        f(t + 8 * h / 9, ytmp, k5);
        stage(ytmp, {{&k1, 9017.0 / 3168}, {&k2, -355.0 / 33}, {&k3, 46732.0 / 5247}, {&k4, 49.0 / 176}, {&k5, -5103.0 / 18656}});
        f(t + h, ytmp, k6);
        stage(y5, {{&k1, 35.0 / 384}, {&k3, 500.0 / 1113}, {&k4, 125.0 / 192}, {&k5, -2187.0 / 6784}, {&k6, 11.0 / 84}});
        f(t + h, y5, k7);

        // Embedded 4th-order error estimate.
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e =
                h * (71.0 / 57600 * k1[i] - 71.0 / 16695 * k3[i] + 71.0 / 1920 * k4[i] -
                     17253.0 / 339200 * k5[i] + 22.0 / 525 * k6[i] - 1.0 / 40 * k7[i]);
            const double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
            err = std::max(err, std::abs(e) / scale);
        }

        if (err <= 1.0) {
            t += h;
            y.swap(y5);
            k1.swap(k7); // FSAL
        }
        const double grow = err > 0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(grow, 0.1, 5.0);
        if (!(h > 0) || t + h == t) throw std::runtime_error("ode: step size underflow");
    }
    throw std::runtime_error("ode: step limit exceeded");
}

} // namespace fitwave::ode
