#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fitwave {

// Model constants. All rates are per unit of simulation time.
struct Params {
    int n = 2;          // population size
    double mu = 1.0;    // mutation rate per individual
    double q = 0.5;     // probability that a mutation is beneficial
    double gamma = 1.0; // selection coefficient per unit fitness gap

    // gamma == 0 is accepted as the neutral degenerate case; it is used by
    // the drift identity checks.
    void validate() const {
        if (n < 2) throw std::invalid_argument("model constraint violated: n must be >= 2");
        if (!(mu > 0.0)) throw std::invalid_argument("model constraint violated: mu must be > 0");
        if (!(q > 0.0 && q <= 1.0))
            throw std::invalid_argument("model constraint violated: q must satisfy 0 < q <= 1");
        if (!(gamma >= 0.0))
            throw std::invalid_argument("model constraint violated: gamma must be >= 0");
    }
};

// Derived width/time scales used by the width experiments:
//   width_scale = floor(w * ln N / ln ln N)
//   time_scale  = w^{-1/2} * ln ln N
// Requires N >= 16 so that ln ln N > 0.
struct Scales {
    double w = 0.0;
    std::int64_t width_scale = 0;
    double time_scale = 0.0;

    static Scales from(int n, double w_value) {
        if (n < 16) throw std::invalid_argument("scales require n >= 16 (ln ln N must be positive)");
        if (!(w_value > 0.0)) throw std::invalid_argument("scales require w > 0");
        const double ln_n = std::log(double(n));
        const double lln_n = std::log(ln_n);
        Scales s;
        s.w = w_value;
        s.width_scale = (std::int64_t)std::floor(w_value * ln_n / lln_n);
        s.time_scale = lln_n / std::sqrt(w_value);
        return s;
    }

    // Default choice w(N) = sqrt(ln ln N): grows without bound, and
    // w(N)/ln ln N -> 0.
    static double default_w(int n) {
        if (n < 16) throw std::invalid_argument("scales require n >= 16 (ln ln N must be positive)");
        return std::sqrt(std::log(std::log(double(n))));
    }

    static Scales defaults(int n) { return from(n, default_w(n)); }
};

} // namespace fitwave
