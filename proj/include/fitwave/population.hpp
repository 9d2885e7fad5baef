#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace fitwave {

// Fitness state of the N individuals, plus a fitness-class index so that
// rate computations and class sampling are O(K) in the number of distinct
// fitness values rather than O(N).
class Population {
public:
    Population() = default;

    static Population constant(int n, std::int64_t fitness_value);
    static Population from_fitness(std::vector<std::int64_t> fitness);

    int size() const { return (int)fitness_.size(); }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    std::int64_t fitness(int i) const { return fitness_[i]; }
    const std::vector<std::int64_t>& fitness() const { return fitness_; }

    std::int64_t max_fitness() const { return classes_.rbegin()->first; }
    std::int64_t min_fitness() const { return classes_.begin()->first; }
    std::int64_t width() const { return max_fitness() - min_fitness(); }
    std::int64_t fitness_sum() const { return sum_; }
    double mean_fitness() const { return double(sum_) / double(size()); }

    // Ordered fitness value -> members of that class. Iteration order is the
    // fitness order; member order within a class is arbitrary but
    // deterministic.
    const std::map<std::int64_t, std::vector<std::int32_t>>& classes() const { return classes_; }

    void mutate(std::int32_t i, std::int64_t delta);
    void replace(std::int32_t target, std::int32_t source); // fitness[target] := fitness[source]

    // Full structural self-check; used by tests.
    bool consistent() const;

private:
    void insert_into_class(std::int32_t i, std::int64_t value);
    void remove_from_class(std::int32_t i);

    std::vector<std::int64_t> fitness_;
    std::map<std::int64_t, std::vector<std::int32_t>> classes_;
    std::vector<std::int32_t> slot_; // position of individual i inside its class vector
    std::int64_t sum_ = 0;
    double time_ = 0.0;
};

} // namespace fitwave
