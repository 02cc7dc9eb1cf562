#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <vector>

#include "wsopt/eval/protocol.hpp"
#include "wsopt/prediction/bayes.hpp"
#include "wsopt/prediction/heuristic.hpp"
#include "wsopt/prediction/maxent_irl.hpp"
#include "wsopt/prediction/ts_gaussian.hpp"

namespace wsopt {

/// Shortest-distance heuristic; ignores its training set.
inline TrainFn<GridPos> heuristic_trainer(const GridLayout& layout) {
    auto g = std::make_shared<const GridLayout>(layout);
    return [g](const Dataset<GridPos>&) -> PredictFn<GridPos> {
        return [g](std::span<const GridPos> prefix, double, std::span<const GoalId> goals) {
            return nearest_goal_heuristic(*g, prefix, goals);
        };
    };
}

inline TrainFn<Vec2> heuristic_trainer(const TabletopScene& scene) {
    auto s = std::make_shared<const TabletopScene>(scene);
    return [s](const Dataset<Vec2>&) -> PredictFn<Vec2> {
        return [s](std::span<const Vec2> prefix, double, std::span<const GoalId> goals) {
            return nearest_goal_heuristic(*s, prefix, goals);
        };
    };
}

/// Bayesian goal inference under unit step costs; ignores its training set.
inline TrainFn<GridPos> unit_bayes_trainer(const GridLayout& layout) {
    auto p = std::make_shared<const BayesianPredictor>(layout);
    return [p](const Dataset<GridPos>&) -> PredictFn<GridPos> {
        return [p](std::span<const GridPos> prefix, double, std::span<const GoalId> goals) {
            return p->predict(prefix, goals);
        };
    };
}

struct IrlTrainerParams {
    IrlParams irl;
    double cost_floor = 1e-3;
};

/// Bayesian goal inference under MaxEnt IRL costs fitted on the training
/// walks. The horizon grows to the longest training walk when needed.
inline TrainFn<GridPos> irl_bayes_trainer(const GridLayout& layout, IrlTrainerParams params = {}) {
    auto g = std::make_shared<const GridLayout>(layout);
    return [g, params](const Dataset<GridPos>& train) -> PredictFn<GridPos> {
        std::vector<std::vector<GridPos>> demos;
        std::size_t longest = 0;
        for (const auto& t : train) {
            demos.push_back(t.points);
            longest = std::max(longest, t.points.size() - 1);
        }
        IrlParams irl = params.irl;
        if (irl.horizon == 0) irl.horizon = std::max(default_horizon(*g), longest);
        const IrlResult fit = maxent_irl_fit(*g, demos, irl);
        auto p = std::make_shared<const BayesianPredictor>(*g, fit.model, params.cost_floor);
        return [p](std::span<const GridPos> prefix, double, std::span<const GoalId> goals) {
            return p->predict(prefix, goals);
        };
    };
}

struct TsgTrainerParams {
    std::size_t k = 50;
    double epsilon = 1e-6;
};

inline TimeSeriesGaussian fit_tsg(const Dataset<Vec2>& train, const TsgTrainerParams& params) {
    std::map<GoalId, std::vector<std::vector<Vec2>>> by_goal;
    for (const auto& t : train) by_goal[t.goal].push_back(t.points);
    return TimeSeriesGaussian::fit(by_goal, params.k, params.epsilon);
}

/// Time-series Gaussian over DTW-aligned reach positions.
inline TrainFn<Vec2> tsg_trainer(TsgTrainerParams params = {}) {
    return [params](const Dataset<Vec2>& train) -> PredictFn<Vec2> {
        auto m = std::make_shared<const TimeSeriesGaussian>(fit_tsg(train, params));
        return [m](std::span<const Vec2> prefix, double fraction, std::span<const GoalId> goals) {
            return m->predict(prefix, fraction, goals);
        };
    };
}

/// Mean determinant and mean trace over every (goal, step) covariance.
inline std::pair<double, double> covariance_stats(const TimeSeriesGaussian& model) {
    return model.covariance_summary();
}

} // namespace wsopt
