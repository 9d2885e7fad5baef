#include "fitwave/population.hpp"

#include <numeric>
#include <stdexcept>

namespace fitwave {

Population Population::constant(int n, std::int64_t fitness_value) {
    return from_fitness(std::vector<std::int64_t>(n, fitness_value));
}

Population Population::from_fitness(std::vector<std::int64_t> fitness) {
    if (fitness.size() < 2) throw std::invalid_argument("population needs at least 2 individuals");
    Population p;
    p.fitness_ = std::move(fitness);
    p.slot_.assign(p.fitness_.size(), -1);
    for (std::int32_t i = 0; i < (std::int32_t)p.fitness_.size(); ++i) {
        p.insert_into_class(i, p.fitness_[i]);
        p.sum_ += p.fitness_[i];
    }
    return p;
}

void Population::insert_into_class(std::int32_t i, std::int64_t value) {
    auto& members = classes_[value];
    slot_[i] = (std::int32_t)members.size();
    members.push_back(i);
}

void Population::remove_from_class(std::int32_t i) {
    auto it = classes_.find(fitness_[i]);
    auto& members = it->second;
    const std::int32_t pos = slot_[i];
    const std::int32_t last = members.back();
    members[pos] = last;
    slot_[last] = pos;
    members.pop_back();
    if (members.empty()) classes_.erase(it);
}

void Population::mutate(std::int32_t i, std::int64_t delta) {
    remove_from_class(i);
    fitness_[i] += delta;
    sum_ += delta;
    insert_into_class(i, fitness_[i]);
}

void Population::replace(std::int32_t target, std::int32_t source) {
    const std::int64_t nv = fitness_[source];
    if (fitness_[target] == nv) return;
    remove_from_class(target);
    sum_ += nv - fitness_[target];
    fitness_[target] = nv;
    insert_into_class(target, nv);
}

bool Population::consistent() const {
    std::size_t counted = 0;
    std::int64_t sum = 0;
    for (const auto& [value, members] : classes_) {
        if (members.empty()) return false;
        counted += members.size();
        for (std::int32_t i : members) {
            if (fitness_[i] != value) return false;
            if (slot_[i] < 0 || slot_[i] >= (std::int32_t)members.size()) return false;
            if (members[slot_[i]] != i) return false;
        }
    }
    for (std::int64_t f : fitness_) sum += f;
    return counted == fitness_.size() && sum == sum_ && min_fitness() <= max_fitness();
}

} // namespace fitwave
