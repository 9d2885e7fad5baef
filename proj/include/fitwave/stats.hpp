#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace fitwave {

struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    std::size_t n = 0;
    double lo95 = 0.0;
    double hi95 = 0.0;
};

Estimate estimate_from(const std::vector<double>& values);
Estimate binomial_estimate(std::size_t successes, std::size_t trials);

inline double pooled_se(double se_a, double se_b) { return std::sqrt(se_a * se_a + se_b * se_b); }
inline double pooled_se(double se_a, double se_b, double se_c) {
    return std::sqrt(se_a * se_a + se_b * se_b + se_c * se_c);
}

// Two-sample Kolmogorov-Smirnov statistic; inputs need not be sorted.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Critical value c(alpha) * sqrt((n + m) / (n m)); alpha in {0.01, 0.05}.
double ks_critical(std::size_t n, std::size_t m, double alpha);

} // namespace fitwave
