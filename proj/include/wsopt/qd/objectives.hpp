#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/parallel.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/legibility/task_objective.hpp"
#include "wsopt/qd/map_elites.hpp"

namespace wsopt {

enum class ObjectiveKind { legible, efficient, legible_efficient };

inline std::string_view objective_name(ObjectiveKind k) {
    switch (k) {
    case ObjectiveKind::legible: return "legible";
    case ObjectiveKind::efficient: return "efficient";
    case ObjectiveKind::legible_efficient: return "legible-efficient";
    }
    return "?";
}

inline ObjectiveKind objective_from_name(std::string_view s) {
    if (s == "legible") return ObjectiveKind::legible;
    if (s == "efficient") return ObjectiveKind::efficient;
    if (s == "legible-efficient") return ObjectiveKind::legible_efficient;
    throw InvalidArgument("unknown objective '" + std::string(s) + "'");
}

inline GridGoalModel goal_model(const GridLayout& g) { return GridGoalModel(g, CostModel::uniform(g)); }
inline TabletopGoalModel goal_model(const TabletopScene& s) { return TabletopGoalModel(s); }

/// Per-objective affine normalisation used to combine legibility and
/// efficiency with equal weights.
struct ZNorm {
    double legibility_mean = 0.0, legibility_sd = 1.0;
    double efficiency_mean = 0.0, efficiency_sd = 1.0;
};

/// Task objectives for one workspace type. Stage classes are computed once
/// and shared by every evaluation; evaluation itself is reentrant.
template <class Workspace>
class WorkspaceObjective {
public:
    WorkspaceObjective(const TaskGraph& task, LegibilityConfig config)
        : classes_(std::make_shared<std::vector<StageClass>>(stage_classes(task))), config_(std::move(config)) {
        config_.check();
    }

    double legibility(const Workspace& w) const { return task_legibility(goal_model(w), *classes_, config_); }
    double efficiency(const Workspace& w) const { return task_efficiency(goal_model(w), *classes_); }

    double combined(const Workspace& w, const ZNorm& z) const {
        const auto m = goal_model(w);
        return (task_legibility(m, *classes_, config_) - z.legibility_mean) / z.legibility_sd +
               (task_efficiency(m, *classes_) - z.efficiency_mean) / z.efficiency_sd;
    }

    Objective<Workspace> make(ObjectiveKind kind, ZNorm z = {}) const {
        const WorkspaceObjective self = *this;
        switch (kind) {
        case ObjectiveKind::legible: return [self](const Workspace& w) { return self.legibility(w); };
        case ObjectiveKind::efficient: return [self](const Workspace& w) { return self.efficiency(w); };
        case ObjectiveKind::legible_efficient: return [self, z](const Workspace& w) { return self.combined(w, z); };
        }
        throw InvalidArgument("unknown objective kind");
    }

    const LegibilityConfig& config() const { return config_; }
    const std::vector<StageClass>& classes() const { return *classes_; }

private:
    std::shared_ptr<const std::vector<StageClass>> classes_;
    LegibilityConfig config_;
};

inline double sample_mean(const std::vector<double>& v) {
    if (v.empty()) throw InvalidArgument("mean of an empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Unbiased standard deviation; 0 for fewer than two values.
inline double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = sample_mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

/// Means and standard deviations of both objectives over `n` random
/// workspaces; a zero spread is replaced by 1.
template <class Space>
ZNorm calibrate_znorm(const Space& space, const WorkspaceObjective<typename Space::Solution>& obj, std::size_t n,
                      Rng& rng, unsigned jobs = 1) {
    std::vector<typename Space::Solution> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(space.random(rng));
    const auto l = parallel_map<double>(xs.size(), jobs, [&](std::size_t i) { return obj.legibility(xs[i]); });
    const auto e = parallel_map<double>(xs.size(), jobs, [&](std::size_t i) { return obj.efficiency(xs[i]); });
    ZNorm z{sample_mean(l), sample_sd(l), sample_mean(e), sample_sd(e)};
    if (!(z.legibility_sd > 0.0)) z.legibility_sd = 1.0;
    if (!(z.efficiency_sd > 0.0)) z.efficiency_sd = 1.0;
    return z;
}

template <class Solution>
struct MedianPick {
    Solution solution;
    double score;
    std::vector<double> scores; // in sampling order
};

/// Scores `n` random workspaces and returns the one at the lower median
/// (rank (n - 1) / 2 in ascending score, earlier sample first on ties).
template <class Space>
MedianPick<typename Space::Solution> random_median(const Space& space, const Objective<typename Space::Solution>& f,
                                                   std::size_t n, Rng& rng, unsigned jobs = 1) {
    if (n == 0) throw InvalidArgument("random median needs at least one sample");
    std::vector<typename Space::Solution> xs;
    for (std::size_t i = 0; i < n; ++i) xs.push_back(space.random(rng));
    const auto scores = parallel_map<double>(n, jobs, [&](std::size_t i) { return f(xs[i]); });
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    const std::size_t pick = idx[(n - 1) / 2];
    return {xs[pick], scores[pick], scores};
}

} // namespace wsopt
