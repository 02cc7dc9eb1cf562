#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/env/task_graph.hpp"
#include "wsopt/legibility/goal_models.hpp"
#include "wsopt/legibility/task_objective.hpp"
#include "wsopt/planning/simulate.hpp"

namespace wsopt {

/// One simulated trip: the motion, its target, and the goals that were
/// valid at the stage it was drawn from.
template <class Point>
struct LabeledTrajectory {
    std::vector<Point> points;
    GoalId goal = 0;
    int start = kDefaultStart;
    std::vector<GoalId> valid_goals;
    friend bool operator==(const LabeledTrajectory&, const LabeledTrajectory&) = default;
};

template <class Point>
using Dataset = std::vector<LabeledTrajectory<Point>>;

template <class Point>
std::vector<GoalId> labels(const Dataset<Point>& d) {
    std::vector<GoalId> out;
    out.reserve(d.size());
    for (const auto& t : d) out.push_back(t.goal);
    return out;
}

namespace detail {

/// For every scored goal, the stage classes whose valid set contains it.
template <class Model>
std::map<GoalId, std::vector<const StageClass*>> classes_by_goal(std::span<const StageClass> classes) {
    std::map<GoalId, std::vector<const StageClass*>> out;
    for (const StageClass& sc : classes)
        for (GoalId g : sc.valid_goals)
            if (Model::scored(g)) out[g].push_back(&sc);
    return out;
}

/// Samples `n_per_goal` (stage, goal) pairs per scored goal, stage drawn in
/// proportion to its weight, and simulates each with its own sub-seed so
/// the dataset does not depend on evaluation order.
template <class Point, class Model, class Simulate>
Dataset<Point> sample_dataset(const Model& model, const TaskGraph& task, std::size_t n_per_goal, std::uint64_t seed,
                              Simulate&& simulate) {
    if (n_per_goal == 0) throw InvalidArgument("n_per_goal must be positive");
    const auto classes = stage_classes(task);
    const auto by_goal = classes_by_goal<Model>(classes);
    if (by_goal.empty()) throw InvalidArgument("task has no scored goals");
    Dataset<Point> out;
    out.reserve(by_goal.size() * n_per_goal);
    for (const auto& [goal, candidates] : by_goal) {
        std::vector<double> w;
        for (const StageClass* sc : candidates) w.push_back(static_cast<double>(sc->weight));
        for (std::size_t i = 0; i < n_per_goal; ++i) {
            Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(goal), i));
            const StageClass& sc = *candidates[sample_weighted(rng, w)];
            LabeledTrajectory<Point> t;
            t.goal = goal;
            t.start = sc.start;
            t.valid_goals = sc.valid_goals;
            t.points = simulate(model.start_point(sc.start), goal, rng);
            out.push_back(std::move(t));
        }
    }
    return out;
}

} // namespace detail

/// Balanced kitchen dataset of noisy-rational walks under `cost`.
inline Dataset<GridPos> generate_dataset(const GridLayout& layout, const TaskGraph& task, std::size_t n_per_goal,
                                         const GridAgentParams& agent, std::uint64_t seed) {
    const GridGoalModel model(layout, CostModel::uniform(layout));
    return detail::sample_dataset<GridPos>(model, task, n_per_goal, seed, [&](GridPos from, GoalId g, Rng& rng) {
        return simulate_human(model.field(g), from, agent, rng).points;
    });
}

/// Balanced tabletop dataset of perturbed reaches from the hand start.
inline Dataset<Vec2> generate_dataset(const TabletopScene& scene, const TaskGraph& task, std::size_t n_per_goal,
                                      const ReachNoise& noise, std::uint64_t seed) {
    const TabletopGoalModel model(scene);
    return detail::sample_dataset<Vec2>(model, task, n_per_goal, seed, [&](Vec2 from, GoalId g, Rng& rng) {
        return simulate_reach(scene, from, model.location(g), noise, rng).points;
    });
}

} // namespace wsopt
