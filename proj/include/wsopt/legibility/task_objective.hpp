#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsopt/core/exact_sum.hpp"
#include "wsopt/env/task_graph.hpp"
#include "wsopt/legibility/goal_models.hpp"
#include "wsopt/legibility/posterior.hpp"

namespace wsopt {

/// A stage seen from the observer: where the agent starts and which goals
/// are valid. `weight` counts the (sequence, stage) pairs that realise it.
struct StageClass {
    int start = kDefaultStart;
    std::vector<GoalId> valid_goals;
    std::uint64_t weight = 0;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) throw InvalidArgument("stage weight overflows 64 bits");
    return r;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_add_overflow(a, b, &r)) throw InvalidArgument("stage weight overflows 64 bits");
    return r;
}

} // namespace detail

/// Collapses every stage of every valid sequence into classes keyed by
/// (start location, valid goal set). For a completed set C whose last
/// subtask is l, the multiplicity is (#orderings of C \ l) * (#completions
/// of C). Sum of weights = (#sequences) * (#subtasks).
inline std::vector<StageClass> stage_classes(const TaskGraph& task) {
    const auto sets = downsets(task);
    std::unordered_map<SubtaskMask, std::uint64_t> prefix_count{{0, 1}};
    for (SubtaskMask d : sets) {
        const std::uint64_t f = prefix_count.at(d);
        SubtaskMask avail = task.available(d);
        while (avail) {
            const SubtaskMask bit = avail & (~avail + 1);
            avail ^= bit;
            prefix_count[d | bit] = detail::checked_add(prefix_count[d | bit], f);
        }
    }
    std::unordered_map<SubtaskMask, std::uint64_t> completions;
    for (auto it = sets.rbegin(); it != sets.rend(); ++it) {
        const SubtaskMask d = *it;
        if (d == task.full_mask()) {
            completions[d] = 1;
            continue;
        }
        std::uint64_t total = 0;
        SubtaskMask avail = task.available(d);
        while (avail) {
            const SubtaskMask bit = avail & (~avail + 1);
            avail ^= bit;
            total = detail::checked_add(total, completions.at(d | bit));
        }
        completions[d] = total;
    }

    std::map<std::pair<int, std::vector<GoalId>>, std::uint64_t> grouped;
    for (SubtaskMask c : sets) {
        if (c == task.full_mask()) continue;
        const auto goals = task.valid_goals(c);
        const std::uint64_t g = completions.at(c);
        if (c == 0) {
            auto& w = grouped[{task.initial_location(), goals}];
            w = detail::checked_add(w, g);
            continue;
        }
        for (std::size_t l = 0; l < task.size(); ++l) {
            const SubtaskMask bit = SubtaskMask{1} << l;
            if (!(c & bit)) continue;
            const SubtaskMask rest = c & ~bit;
            if (!task.is_downset(rest) || !(task.available(rest) & bit)) continue;
            auto& w = grouped[{task.location_after(l), goals}];
            w = detail::checked_add(w, detail::checked_mul(prefix_count.at(rest), g));
        }
    }
    std::vector<StageClass> out;
    out.reserve(grouped.size());
    for (auto& [key, w] : grouped) out.push_back({key.first, key.second, w});
    return out;
}

/// One (stage class, goal, fraction) term of the task objective.
struct LegibilityTerm {
    int start = kDefaultStart;
    std::size_t goal_count = 0;
    GoalId goal = 0;
    double fraction = 0.0;
    std::size_t steps = 0;
    double score = 0.0;
    std::uint64_t weight = 0;
};

/// Legibility terms of one stage: the optimal trajectory from the stage
/// start to each scored valid goal, cut at every configured fraction.
template <class Model>
std::vector<LegibilityTerm> stage_terms(const Model& model, int start, const std::vector<GoalId>& valid,
                                        const LegibilityConfig& config) {
    std::vector<LegibilityTerm> terms;
    const auto from = model.start_point(start);
    for (GoalId g : valid) {
        if (!Model::scored(g)) continue;
        const auto traj = model.optimal(from, g);
        for (double f : config.fractions) {
            const std::size_t k = prefix_steps(traj.steps(), f);
            const auto prefix = take_prefix(traj.points, k);
            const GoalPosterior post = model.posterior(prefix, valid);
            terms.push_back({start, valid.size(), g, f, k, env_legibility(g, post, k, config), 0});
        }
    }
    return terms;
}

/// Every weighted term of the task objective, in deterministic order.
template <class Model>
std::vector<LegibilityTerm> legibility_breakdown(const Model& model, std::span<const StageClass> classes,
                                                 const LegibilityConfig& config) {
    config.check();
    std::vector<LegibilityTerm> out;
    for (const StageClass& sc : classes)
        for (LegibilityTerm t : stage_terms(model, sc.start, sc.valid_goals, config)) {
            t.weight = sc.weight;
            out.push_back(t);
        }
    return out;
}

template <class Model>
std::vector<LegibilityTerm> legibility_breakdown(const Model& model, const TaskGraph& task,
                                                 const LegibilityConfig& config) {
    return legibility_breakdown(model, stage_classes(task), config);
}

/// Sum over valid sequences, their stages, scored valid goals and prefix
/// fractions of the per-goal legibility score. Accumulated exactly, so the
/// result does not depend on summation order.
template <class Model>
double task_legibility(const Model& model, std::span<const StageClass> classes, const LegibilityConfig& config) {
    ExactSum total;
    for (const LegibilityTerm& t : legibility_breakdown(model, classes, config)) total.add_weighted(t.weight, t.score);
    return total.value();
}

template <class Model>
double task_legibility(const Model& model, const TaskGraph& task, const LegibilityConfig& config) {
    return task_legibility(model, stage_classes(task), config);
}

/// Negated sum of optimal path costs over the same stage set as
/// task_legibility (one term per scored goal, no fractions).
template <class Model>
double task_efficiency(const Model& model, std::span<const StageClass> classes) {
    ExactSum total;
    for (const StageClass& sc : classes) {
        const auto from = model.start_point(sc.start);
        for (GoalId g : sc.valid_goals)
            if (Model::scored(g)) total.add_weighted(sc.weight, -model.optimal_cost(from, g));
    }
    return total.value();
}

template <class Model>
double task_efficiency(const Model& model, const TaskGraph& task) {
    return task_efficiency(model, stage_classes(task));
}

inline double task_legibility(const GridLayout& layout, const TaskGraph& task, const CostModel& cost,
                              const LegibilityConfig& config) {
    return task_legibility(GridGoalModel(layout, cost), task, config);
}

inline double task_legibility(const TabletopScene& scene, const TaskGraph& task, const LegibilityConfig& config) {
    return task_legibility(TabletopGoalModel(scene), task, config);
}

} // namespace wsopt
