#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/planning/grid_planner.hpp"
#include "wsopt/planning/visibility.hpp"

namespace wsopt {

/// Noisy-rational grid agent: at every cell it picks a successor with
/// probability proportional to exp(-beta * Q(s, a)), where Q is the cost of
/// the move plus the optimal cost-to-go. beta = +inf reproduces the planner.
struct GridAgentParams {
    double beta = 3.0;
    double length_cap = 4.0;  // resample when longer than cap * optimal steps
    int max_retries = 100;
};

inline GridTrajectory simulate_human(const CostToGo& ctg, GridPos from, const GridAgentParams& params, Rng& rng) {
    const GridTrajectory optimal = follow_optimal(ctg, from);
    if (std::isinf(params.beta) || optimal.steps() == 0) return optimal;
    if (!(params.beta >= 0.0)) throw InvalidArgument("beta must be non-negative");
    const auto cap = static_cast<std::size_t>(std::ceil(params.length_cap * static_cast<double>(optimal.steps())));
    std::vector<GridPos> moves;
    std::vector<double> q;
    std::vector<double> w;
    for (int attempt = 0; attempt < params.max_retries; ++attempt) {
        GridTrajectory t;
        t.points.push_back(from);
        GridPos cur = from;
        while (cur != ctg.goal() && t.steps() < cap) {
            moves.clear();
            q.clear();
            for (GridPos m : ctg.moves(cur)) {
                const double v = ctg.move_value(m);
                if (!std::isfinite(v)) continue;
                moves.push_back(m);
                q.push_back(v);
            }
            if (moves.empty()) throw Unreachable("agent stuck");
            double qmin = q.front();
            for (double v : q) qmin = std::min(qmin, v);
            w.resize(q.size());
            for (std::size_t i = 0; i < q.size(); ++i) w[i] = std::exp(-params.beta * (q[i] - qmin));
            const GridPos next = moves[sample_weighted(rng, w)];
            t.cost += ctg.cost()(next);
            t.points.push_back(next);
            cur = next;
        }
        if (cur == ctg.goal()) return t;
    }
    throw Error("simulated agent failed to reach the goal within the retry budget");
}

inline GridTrajectory simulate_human(const GridLayout& layout, const CostModel& cost, GridPos from, GridPos to,
                                     const GridAgentParams& params, Rng& rng) {
    const CostToGo ctg(layout, cost, to);
    return simulate_human(ctg, from, params, rng);
}

/// Smooth reach perturbation: the optimal visibility path plus a zero-mean
/// Gaussian process over normalised arc length s, expanded in a sine basis
/// so both end points stay fixed. Mode j has variance proportional to
/// exp(-(j pi l)^2 / 2) (squared-exponential spectrum), normalised so the
/// marginal standard deviation never exceeds `sigma`. Draws that cross a
/// barrier are redrawn; the amplitude halves every quarter of the retry
/// budget and the unperturbed path is returned once the budget runs out.
struct ReachNoise {
    double sigma = 0.02;
    double length_scale = 0.2;
    int modes = 6;
    int max_retries = 200;
};

inline std::vector<double> reach_mode_variances(const ReachNoise& noise) {
    std::vector<double> w(static_cast<std::size_t>(noise.modes));
    double total = 0.0;
    for (int j = 1; j <= noise.modes; ++j) {
        const double a = j * std::numbers::pi * noise.length_scale;
        w[static_cast<std::size_t>(j - 1)] = std::exp(-0.5 * a * a);
        total += w[static_cast<std::size_t>(j - 1)];
    }
    for (double& v : w) v /= total;
    return w;
}

inline PlanarTrajectory simulate_reach(const TabletopScene& scene, Vec2 from, Vec2 to, const ReachNoise& noise,
                                       Rng& rng) {
    PlanarTrajectory base = continuous_shortest_path(scene, from, to);
    if (noise.sigma == 0.0 || base.points.size() < 3) return base;
    if (!(noise.sigma > 0.0)) throw InvalidArgument("reach noise must be non-negative");
    const VisibilityGraph graph(scene.barriers);
    const std::size_t n = base.points.size();
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) s[i] = s[i - 1] + distance(base.points[i - 1], base.points[i]);
    const double total = s.back();
    for (double& v : s) v /= total;
    const auto var = reach_mode_variances(noise);
    std::vector<double> ax(var.size()), ay(var.size());
    const int stage = std::max(1, noise.max_retries / 4);
    for (int attempt = 0; attempt < noise.max_retries; ++attempt) {
        // Paths hugging barrier corners clip often; back off the amplitude.
        const double amplitude = noise.sigma * std::ldexp(1.0, -(attempt / stage));
        for (std::size_t j = 0; j < var.size(); ++j) {
            ax[j] = std::sqrt(var[j]) * standard_normal(rng);
            ay[j] = std::sqrt(var[j]) * standard_normal(rng);
        }
        PlanarTrajectory t;
        t.points.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            double dx = 0.0, dy = 0.0;
            for (std::size_t j = 0; j < var.size(); ++j) {
                const double b = std::sin(static_cast<double>(j + 1) * std::numbers::pi * s[i]);
                dx += ax[j] * b;
                dy += ay[j] * b;
            }
            t.points[i] = {base.points[i].x + amplitude * dx, base.points[i].y + amplitude * dy};
        }
        t.points.front() = from;
        t.points.back() = to;
        bool clear = true;
        for (std::size_t i = 1; i < n && clear; ++i) clear = graph.visible(t.points[i - 1], t.points[i]);
        if (!clear) continue;
        t.cost = VisibilityGraph::polyline_length(t.points);
        return t;
    }
    return base;
}

} // namespace wsopt
