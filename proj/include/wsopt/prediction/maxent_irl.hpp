#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/env/grid_layout.hpp"
#include "wsopt/planning/grid_planner.hpp"

namespace wsopt {

/// Linear state cost over one-hot position features: C(s) = theta[s].
/// A trajectory's cost sums the cells it enters.
class LinearCostModel {
public:
    LinearCostModel() = default;
    LinearCostModel(int width, int height, std::vector<double> theta)
        : width_(width), height_(height), theta_(std::move(theta)) {
        if (theta_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw InvalidArgument("theta size does not match grid");
        for (double v : theta_)
            if (!std::isfinite(v)) throw InvalidArgument("theta must be finite");
    }
    static LinearCostModel zeros(int width, int height) {
        return LinearCostModel(width, height, std::vector<double>(static_cast<std::size_t>(width * height), 0.0));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    const std::vector<double>& theta() const { return theta_; }
    double operator()(GridPos p) const {
        return theta_.at(static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(p.x));
    }

    double path_cost(std::span<const GridPos> points) const {
        double total = 0.0;
        for (std::size_t i = 1; i < points.size(); ++i) total += (*this)(points[i]);
        return total;
    }

    /// Planner costs: theta clamped below at `floor` so shortest paths exist.
    CostModel to_cost_model(double floor = 1e-3) const {
        std::vector<double> c = theta_;
        for (double& v : c) v = std::max(v, floor);
        return CostModel(width_, height_, std::move(c));
    }

    friend bool operator==(const LinearCostModel&, const LinearCostModel&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> theta_;
};

struct IrlParams {
    std::size_t max_iterations = 500;
    double tolerance = 1e-5; // on the gradient norm
    std::size_t horizon = 0; // 0: twice the perimeter ring length
    double initial_step = 1.0;
    double armijo = 1e-4;
    double min_step = 1e-14;
};

struct IrlResult {
    LinearCostModel model;
    std::vector<double> log_likelihood; // after each accepted step, starting at theta = 0
    std::size_t iterations = 0;
    bool converged = false;
};

struct Likelihood {
    double value = 0.0;
    std::vector<double> gradient; // d value / d theta
};

namespace detail {

inline double log_add(double a, double b) {
    if (a == -kInf) return b;
    if (b == -kInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

/// A move from any cell may enter a floor cell or the goal itself.
inline bool enterable(const GridLayout& g, GridPos n, GridPos goal) { return n == goal || g.is_floor(n); }

} // namespace detail

inline std::size_t default_horizon(const GridLayout& g) { return 2 * static_cast<std::size_t>(g.ring_length()); }

/// Checks that each demonstration is a 4-connected walk that passes only
/// through floor and stops on first reaching its final cell.
inline void check_demonstrations(const GridLayout& g, std::span<const std::vector<GridPos>> demos, std::size_t horizon) {
    for (const auto& d : demos) {
        if (d.size() < 2) throw InvalidArgument("demonstration needs at least one move");
        if (d.size() - 1 > horizon) throw InvalidArgument("demonstration longer than the horizon");
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (!g.in_bounds(d[i])) throw InvalidArgument("demonstration leaves the grid");
            if (i > 0 && !adjacent4(d[i - 1], d[i])) throw InvalidArgument("demonstration is not 4-connected");
            if (i > 0 && i + 1 < d.size() && (!g.is_floor(d[i]) || d[i] == d.back()))
                throw InvalidArgument("demonstration passes through a non-floor cell or its goal");
        }
    }
}

/// Log-likelihood of the demonstrations under p(xi) = exp(-C(xi)) / Z, where
/// Z sums over every walk of at most `horizon` moves from the demo's start
/// that ends on first entering its goal. Z comes from a backward log-sum-exp
/// recursion; expected visitation counts from a forward pass with the
/// time-indexed policy. The gradient is expected minus empirical counts.
inline Likelihood maxent_likelihood(const GridLayout& g, std::span<const std::vector<GridPos>> demos,
                                    std::span<const double> theta, std::size_t horizon) {
    const std::size_t n = g.size();
    if (theta.size() != n) throw InvalidArgument("theta size does not match grid");
    Likelihood out;
    out.gradient.assign(n, 0.0);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> pairs; // (goal, start) -> demo count
    for (const auto& d : demos) {
        ++pairs[{g.index(d.back()), g.index(d.front())}];
        for (std::size_t i = 1; i < d.size(); ++i) {
            out.value -= theta[g.index(d[i])];
            out.gradient[g.index(d[i])] -= 1.0;
        }
    }
    std::vector<std::vector<std::size_t>> moves(n);
    std::size_t current_goal = n;
    std::vector<std::vector<double>> v; // v[t][s]: log sum over walks from s of <= t moves
    for (const auto& [key, count] : pairs) {
        const auto [goal_i, start_i] = key;
        const GridPos goal = g.pos(goal_i);
        if (goal_i != current_goal) {
            current_goal = goal_i;
            for (std::size_t s = 0; s < n; ++s) {
                moves[s].clear();
                for (GridPos q : g.neighbors(g.pos(s)))
                    if (detail::enterable(g, q, goal)) moves[s].push_back(g.index(q));
            }
            v.assign(horizon + 1, std::vector<double>(n, -kInf));
            v[0][goal_i] = 0.0;
            for (std::size_t t = 1; t <= horizon; ++t) {
                for (std::size_t s = 0; s < n; ++s) {
                    if (s == goal_i) {
                        v[t][s] = 0.0;
                        continue;
                    }
                    double acc = -kInf;
                    for (std::size_t q : moves[s]) acc = detail::log_add(acc, -theta[q] + v[t - 1][q]);
                    v[t][s] = acc;
                }
            }
        }
        const double log_z = v[horizon][start_i];
        if (log_z == -kInf) throw Unreachable("demonstration goal unreachable within the horizon");
        out.value -= static_cast<double>(count) * log_z;
        std::vector<double> mass(n, 0.0), next(n, 0.0);
        mass[start_i] = static_cast<double>(count);
        for (std::size_t t = horizon; t >= 1; --t) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t s = 0; s < n; ++s) {
                if (mass[s] == 0.0 || s == goal_i || v[t][s] == -kInf) continue;
                for (std::size_t q : moves[s]) {
                    const double flow = mass[s] * std::exp(-theta[q] + v[t - 1][q] - v[t][s]);
                    out.gradient[q] += flow;
                    if (q != goal_i) next[q] += flow;
                }
            }
            std::swap(mass, next);
        }
    }
    return out;
}

/// Full-batch gradient ascent on the log-likelihood from theta = 0 with
/// Armijo backtracking; every accepted step is non-decreasing.
inline IrlResult maxent_irl_fit(const GridLayout& g, std::span<const std::vector<GridPos>> demos,
                                const IrlParams& params = {}) {
    if (demos.empty()) throw InvalidArgument("no demonstrations");
    const std::size_t horizon = params.horizon ? params.horizon : default_horizon(g);
    check_demonstrations(g, demos, horizon);
    std::vector<double> theta(g.size(), 0.0);
    Likelihood cur = maxent_likelihood(g, demos, theta, horizon);
    IrlResult res;
    res.log_likelihood.push_back(cur.value);
    double step = params.initial_step;
    auto norm2 = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v * v;
        return s;
    };
    for (; res.iterations < params.max_iterations; ++res.iterations) {
        const double gg = norm2(cur.gradient);
        if (!std::isfinite(gg)) throw NumericalError("non-finite IRL gradient", theta);
        if (std::sqrt(gg) < params.tolerance) {
            res.converged = true;
            break;
        }
        bool accepted = false;
        while (step >= params.min_step) {
            std::vector<double> trial = theta;
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += step * cur.gradient[i];
            Likelihood next;
            try {
                next = maxent_likelihood(g, demos, trial, horizon);
            } catch (const Unreachable&) {
                step /= 2.0;
                continue;
            }
            if (std::isfinite(next.value) && next.value >= cur.value + params.armijo * step * gg) {
                theta = std::move(trial);
                cur = std::move(next);
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if (!accepted) {
            res.converged = true; // no ascent step of any size left
            break;
        }
        res.log_likelihood.push_back(cur.value);
        step *= 2.0;
    }
    for (double v : theta)
        if (!std::isfinite(v)) throw NumericalError("IRL diverged", theta);
    res.model = LinearCostModel(g.width(), g.height(), std::move(theta));
    return res;
}

} // namespace wsopt
