#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/env/task_graph.hpp"

namespace wsopt {

/// fold[r][i] is the test fold of sample i in repeat r.
struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::vector<std::size_t>> fold;

    std::size_t repeats() const { return fold.size(); }

    std::vector<std::size_t> test_indices(std::size_t repeat, std::size_t f) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < fold.at(repeat).size(); ++i)
            if (fold[repeat][i] == f) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> train_indices(std::size_t repeat, std::size_t f) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < fold.at(repeat).size(); ++i)
            if (fold[repeat][i] != f) out.push_back(i);
        return out;
    }
};

namespace detail {

inline std::map<GoalId, std::vector<std::size_t>> members_by_class(std::span<const GoalId> labels) {
    std::map<GoalId, std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < labels.size(); ++i) out[labels[i]].push_back(i);
    return out;
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

} // namespace detail

/// Per repeat, each class is shuffled and dealt round-robin over the folds.
/// The deal continues across classes, so every fold holds floor or ceil of
/// n_c / k members of class c and fold sizes differ by at most one.
inline FoldAssignment stratified_kfold(std::span<const GoalId> labels, std::size_t k, std::size_t repeats,
                                       std::uint64_t seed) {
    if (k < 2) throw InvalidArgument("k must be at least 2");
    if (repeats == 0) throw InvalidArgument("repeats must be positive");
    const auto classes = detail::members_by_class(labels);
    for (const auto& [c, m] : classes)
        if (m.size() < k)
            throw InvalidArgument("class " + std::to_string(c) + " has " + std::to_string(m.size()) +
                                  " members, fewer than k = " + std::to_string(k));
    FoldAssignment out;
    out.k = k;
    for (std::size_t r = 0; r < repeats; ++r) {
        Rng rng = make_rng(derive_seed(seed, r));
        std::vector<std::size_t> fold(labels.size());
        std::size_t next = 0;
        for (auto [c, members] : classes) {
            detail::shuffle(members, rng);
            for (std::size_t i : members) fold[i] = next++ % k;
        }
        out.fold.push_back(std::move(fold));
    }
    return out;
}

/// Nested stratified subsample: per class, the first ceil(fraction * n_c)
/// members of a seeded shuffle. Larger fractions give supersets.
inline std::vector<std::size_t> stratified_subset(std::span<const std::size_t> pool, std::span<const GoalId> labels,
                                                  double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw InvalidArgument("training fraction must lie in (0, 1]");
    std::map<GoalId, std::vector<std::size_t>> classes;
    for (std::size_t i : pool) classes[labels[i]].push_back(i);
    Rng rng = make_rng(seed);
    std::vector<std::size_t> out;
    for (auto [c, members] : classes) {
        detail::shuffle(members, rng);
        const auto n = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(members.size()) - 1e-12));
        if (n == 0) throw InvalidArgument("training fraction leaves class " + std::to_string(c) + " empty");
        out.insert(out.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace wsopt
