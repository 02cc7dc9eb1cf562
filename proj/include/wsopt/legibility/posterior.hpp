#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/env/task_graph.hpp"

namespace wsopt {

/// Probabilities closer than this to the maximum count as tied with it.
inline constexpr double kTieTolerance = 1e-12;

/// Distribution over a goal set. Goals are sorted ascending and unique;
/// probabilities are non-negative and sum to one.
struct GoalPosterior {
    std::vector<GoalId> goals;
    std::vector<double> probs;

    std::size_t size() const { return goals.size(); }

    double operator[](GoalId g) const {
        const auto it = std::lower_bound(goals.begin(), goals.end(), g);
        if (it == goals.end() || *it != g) return 0.0;
        return probs[static_cast<std::size_t>(it - goals.begin())];
    }

    /// Most probable goal; ties resolve to the lowest goal id.
    GoalId argmax() const {
        if (goals.empty()) throw InvalidArgument("empty posterior");
        std::size_t best = 0;
        for (std::size_t i = 1; i < probs.size(); ++i)
            if (probs[i] > probs[best]) best = i;
        return goals[best];
    }

    /// The argmax when no other goal is within `tol` of it.
    std::optional<GoalId> unique_argmax(double tol = kTieTolerance) const {
        if (goals.empty()) return std::nullopt;
        const GoalId g = argmax();
        const double top = (*this)[g];
        for (std::size_t i = 0; i < goals.size(); ++i)
            if (goals[i] != g && top - probs[i] <= tol) return std::nullopt;
        return g;
    }

    /// Highest minus second-highest probability; 1 for a single goal.
    double margin() const {
        if (goals.empty()) throw InvalidArgument("empty posterior");
        if (goals.size() == 1) return 1.0;
        double first = -1.0, second = -1.0;
        for (double p : probs) {
            if (p > first) {
                second = first;
                first = p;
            } else if (p > second) {
                second = p;
            }
        }
        return first - second;
    }

    static GoalPosterior one_hot(std::vector<GoalId> goals, GoalId chosen) {
        std::sort(goals.begin(), goals.end());
        goals.erase(std::unique(goals.begin(), goals.end()), goals.end());
        GoalPosterior p{goals, std::vector<double>(goals.size(), 0.0)};
        const auto it = std::lower_bound(p.goals.begin(), p.goals.end(), chosen);
        if (it == p.goals.end() || *it != chosen) throw InvalidArgument("chosen goal not in goal set");
        p.probs[static_cast<std::size_t>(it - p.goals.begin())] = 1.0;
        return p;
    }
};

/// Normalises log scores with log-sum-exp. Goals with a score of -inf get
/// probability zero; at least one score must be finite.
inline GoalPosterior posterior_from_log_scores(std::span<const GoalId> goals, std::span<const double> log_scores) {
    if (goals.empty()) throw InvalidArgument("empty goal set");
    if (goals.size() != log_scores.size()) throw InvalidArgument("goal/score size mismatch");
    std::vector<std::size_t> order(goals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return goals[a] < goals[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (goals[order[i]] == goals[order[i - 1]]) throw InvalidArgument("duplicate goal in goal set");
    double top = -std::numeric_limits<double>::infinity();
    for (double s : log_scores) {
        if (std::isnan(s) || s == std::numeric_limits<double>::infinity()) throw NumericalError("invalid log score", {});
        top = std::max(top, s);
    }
    if (!std::isfinite(top)) throw Unreachable("no goal is reachable");
    double z = 0.0;
    for (double s : log_scores) z += std::exp(s - top);
    const double log_z = top + std::log(z);
    GoalPosterior p;
    p.goals.reserve(goals.size());
    p.probs.reserve(goals.size());
    for (std::size_t i : order) {
        p.goals.push_back(goals[i]);
        p.probs.push_back(std::exp(log_scores[i] - log_z));
    }
    return p;
}

/// Goal posterior from path costs. For goal G the log score is
///   -C(prefix) - C*(Q -> G) + C*(S -> G),
/// where Q is the last point of the prefix and S its first.
inline GoalPosterior posterior_from_costs(std::span<const GoalId> goals, double prefix_cost,
                                          std::span<const double> cost_to_go, std::span<const double> optimal_cost) {
    if (cost_to_go.size() != goals.size() || optimal_cost.size() != goals.size())
        throw InvalidArgument("goal/cost size mismatch");
    std::vector<double> scores(goals.size());
    for (std::size_t i = 0; i < goals.size(); ++i) {
        if (!std::isfinite(optimal_cost[i]) || !std::isfinite(cost_to_go[i]))
            scores[i] = -std::numeric_limits<double>::infinity();
        else
            scores[i] = -prefix_cost - cost_to_go[i] + optimal_cost[i];
    }
    return posterior_from_log_scores(goals, scores);
}

struct LegibilityConfig {
    double penalty = 1.0; // c, charged per observed step on a wrong prediction
    std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double tie_tolerance = kTieTolerance;

    void check() const {
        if (!(penalty > 0.0) || !std::isfinite(penalty)) throw InvalidArgument("penalty must be positive");
        if (fractions.empty()) throw InvalidArgument("no prefix fractions");
        for (std::size_t i = 0; i < fractions.size(); ++i) {
            if (!(fractions[i] > 0.0 && fractions[i] < 1.0)) throw InvalidArgument("fractions must lie in (0, 1)");
            if (i > 0 && !(fractions[i] > fractions[i - 1])) throw InvalidArgument("fractions must increase");
        }
    }
};

/// Margin of the posterior when its unique argmax is the true goal,
/// otherwise -c * steps.
inline double env_legibility(GoalId true_goal, const GoalPosterior& posterior, std::size_t steps,
                             const LegibilityConfig& config) {
    if (posterior.goals.empty()) throw InvalidArgument("empty goal set");
    if (!std::binary_search(posterior.goals.begin(), posterior.goals.end(), true_goal))
        throw InvalidArgument("true goal not in goal set");
    const auto best = posterior.unique_argmax(config.tie_tolerance);
    if (best && *best == true_goal) return posterior.margin();
    return -config.penalty * static_cast<double>(steps);
}

} // namespace wsopt
