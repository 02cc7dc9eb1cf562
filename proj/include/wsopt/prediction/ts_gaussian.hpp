#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/env/geometry.hpp"
#include "wsopt/env/task_graph.hpp"
#include "wsopt/env/trajectory.hpp"
#include "wsopt/legibility/posterior.hpp"
#include "wsopt/prediction/dtw.hpp"

namespace wsopt {

/// Bivariate normal over (x, y).
struct Gaussian2 {
    Vec2 mean;
    double sxx = 1.0, sxy = 0.0, syy = 1.0;

    double det() const { return sxx * syy - sxy * sxy; }
    double trace() const { return sxx + syy; }

    double log_density(Vec2 p) const {
        const double d = det();
        if (!(d > 0.0) || !(sxx > 0.0)) throw NumericalError("covariance is not positive definite", {});
        const double dx = p.x - mean.x, dy = p.y - mean.y;
        const double q = (syy * dx * dx - 2.0 * sxy * dx * dy + sxx * dy * dy) / d;
        return -0.5 * q - 0.5 * std::log(d) - std::log(2.0 * std::numbers::pi);
    }

    friend bool operator==(const Gaussian2&, const Gaussian2&) = default;
};

/// Per-step sample mean and unbiased covariance of equally long sequences,
/// plus epsilon on the diagonal.
inline std::vector<Gaussian2> fit_steps(const std::vector<std::vector<Vec2>>& aligned, double epsilon) {
    if (aligned.size() < 2) throw InvalidArgument("need at least two trajectories per goal");
    const std::size_t k = aligned.front().size();
    for (const auto& a : aligned)
        if (a.size() != k) throw InvalidArgument("aligned trajectories differ in length");
    const double n = static_cast<double>(aligned.size());
    std::vector<Gaussian2> out(k);
    for (std::size_t t = 0; t < k; ++t) {
        Vec2 m{0.0, 0.0};
        for (const auto& a : aligned) m = m + a[t];
        m = m * (1.0 / n);
        double xx = 0.0, xy = 0.0, yy = 0.0;
        for (const auto& a : aligned) {
            const double dx = a[t].x - m.x, dy = a[t].y - m.y;
            xx += dx * dx;
            xy += dx * dy;
            yy += dy * dy;
        }
        out[t] = {m, xx / (n - 1.0) + epsilon, xy / (n - 1.0), yy / (n - 1.0) + epsilon};
    }
    return out;
}

/// One Gaussian per goal and aligned time step. Each goal keeps its DTW
/// reference: the training medoid resampled to K points by arc length.
class TimeSeriesGaussian {
public:
    struct GoalModel {
        std::vector<Vec2> reference;
        std::vector<Gaussian2> steps;
        friend bool operator==(const GoalModel&, const GoalModel&) = default;
    };

    TimeSeriesGaussian() = default;
    TimeSeriesGaussian(std::size_t k, std::map<GoalId, GoalModel> goals) : k_(k), goals_(std::move(goals)) {
        for (const auto& [g, m] : goals_)
            if (m.reference.size() != k_ || m.steps.size() != k_) throw InvalidArgument("goal model length differs from K");
    }

    static TimeSeriesGaussian fit(const std::map<GoalId, std::vector<std::vector<Vec2>>>& data, std::size_t k,
                                  double epsilon = 1e-6) {
        if (k < 2) throw InvalidArgument("K must be at least 2");
        std::map<GoalId, GoalModel> goals;
        for (const auto& [g, trajs] : data) {
            if (trajs.size() < 2) throw InvalidArgument("goal " + std::to_string(g) + " has fewer than two trajectories");
            GoalModel m;
            m.reference = resample_arclength(trajs[dtw_medoid(trajs)], k);
            std::vector<std::vector<Vec2>> aligned;
            for (const auto& t : trajs) aligned.push_back(dtw_align(t, m.reference));
            m.steps = fit_steps(aligned, epsilon);
            goals.emplace(g, std::move(m));
        }
        return TimeSeriesGaussian(k, std::move(goals));
    }

    std::size_t k() const { return k_; }
    const std::map<GoalId, GoalModel>& goals() const { return goals_; }
    const GoalModel& goal(GoalId g) const {
        const auto it = goals_.find(g);
        if (it == goals_.end()) throw InvalidArgument("no model for goal " + std::to_string(g));
        return it->second;
    }

    /// Mean per-step log density of an already aligned sequence, using its
    /// first aligned.size() steps.
    double log_score(GoalId g, std::span<const Vec2> aligned) const {
        const GoalModel& m = goal(g);
        if (aligned.empty() || aligned.size() > k_) throw InvalidArgument("aligned prefix length outside [1, K]");
        double s = 0.0;
        for (std::size_t t = 0; t < aligned.size(); ++t) s += m.steps[t].log_density(aligned[t]);
        return s / static_cast<double>(aligned.size());
    }

    /// Posterior for a sequence already on the common time base.
    GoalPosterior predict_aligned(std::span<const Vec2> aligned, std::span<const GoalId> goals) const {
        std::vector<double> scores;
        for (GoalId g : goals) scores.push_back(log_score(g, aligned));
        return posterior_from_log_scores(goals, scores);
    }

    /// Posterior for a raw prefix covering `fraction` of the motion: the
    /// prefix is aligned to the first ceil(fraction * K) reference points of
    /// each goal and scored on those steps only.
    GoalPosterior predict(std::span<const Vec2> prefix, double fraction, std::span<const GoalId> goals) const {
        if (prefix.size() < 2) throw InvalidArgument("prefix needs at least two points");
        const std::size_t m = std::max<std::size_t>(1, prefix_steps(k_, fraction));
        std::vector<double> scores;
        for (GoalId g : goals) {
            const auto& ref = goal(g).reference;
            const auto aligned = dtw_align(prefix, std::span<const Vec2>(ref.data(), m));
            scores.push_back(log_score(g, aligned));
        }
        return posterior_from_log_scores(goals, scores);
    }

    /// Means of det and trace over every (goal, step) covariance.
    std::pair<double, double> covariance_summary() const {
        double det = 0.0, tr = 0.0;
        std::size_t n = 0;
        for (const auto& [g, m] : goals_)
            for (const Gaussian2& s : m.steps) {
                det += s.det();
                tr += s.trace();
                ++n;
            }
        if (n == 0) throw InvalidArgument("empty model");
        return {det / static_cast<double>(n), tr / static_cast<double>(n)};
    }

    friend bool operator==(const TimeSeriesGaussian&, const TimeSeriesGaussian&) = default;

private:
    std::size_t k_ = 0;
    std::map<GoalId, GoalModel> goals_;
};

} // namespace wsopt
