#include "fitwave/stats.hpp"

#include <algorithm>
#include <stdexcept>

namespace fitwave {

Estimate estimate_from(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("estimate_from: no values");
    Estimate e;
    e.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    e.mean = sum / double(e.n);
    if (e.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - e.mean) * (v - e.mean);
        e.se = std::sqrt(ss / double(e.n - 1)) / std::sqrt(double(e.n));
    }
    e.lo95 = e.mean - 1.96 * e.se;
    e.hi95 = e.mean + 1.96 * e.se;
    return e;
}

Estimate binomial_estimate(std::size_t successes, std::size_t trials) {
    if (trials == 0) throw std::invalid_argument("binomial_estimate: no trials");
    Estimate e;
    e.n = trials;
    e.mean = double(successes) / double(trials);
    e.se = std::sqrt(e.mean * (1.0 - e.mean) / double(trials));
    e.lo95 = e.mean - 1.96 * e.se;
    e.hi95 = e.mean + 1.96 * e.se;
    return e;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < a.size() && ib < b.size()) {
        const double x = std::min(a[ia], b[ib]);
        while (ia < a.size() && a[ia] <= x) ++ia;
        while (ib < b.size() && b[ib] <= x) ++ib;
        d = std::max(d, std::abs(double(ia) / a.size() - double(ib) / b.size()));
    }
    return d;
}

double ks_critical(std::size_t n, std::size_t m, double alpha) {
    // c(alpha) = sqrt(-ln(alpha/2) / 2)
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    return c * std::sqrt(double(n + m) / (double(n) * double(m)));
}

} // namespace fitwave
