#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/parallel.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/qd/archive.hpp"

namespace wsopt {

template <class Solution>
using Objective = std::function<double(const Solution&)>;

/// Objective-call ledger shared by every optimizer so budgets can be
/// matched exactly. A limit of 0 means unlimited.
class EvalBudget {
public:
    explicit EvalBudget(std::size_t limit = 0) : limit_(limit) {}

    std::size_t used() const { return used_; }
    std::size_t limit() const { return limit_; }
    bool exhausted() const { return limit_ != 0 && used_ >= limit_; }
    std::size_t remaining() const {
        return limit_ == 0 ? std::numeric_limits<std::size_t>::max() : limit_ - std::min(used_, limit_);
    }
    void charge(std::size_t n) {
        if (n > remaining()) throw BudgetExhausted("objective budget exceeded");
        used_ += n;
    }

private:
    std::size_t limit_;
    std::size_t used_ = 0;
};

/// Evaluates every candidate (in parallel, results by index) and charges
/// the budget once per call. A candidate whose evaluation throws a library
/// error scores NaN; other exceptions propagate.
template <class Solution>
std::vector<double> evaluate_batch(const std::vector<Solution>& xs, const Objective<Solution>& f, EvalBudget& budget,
                                   unsigned jobs) {
    budget.charge(xs.size());
    return parallel_map<double>(xs.size(), jobs, [&](std::size_t i) {
        try {
            return f(xs[i]);
        } catch (const BudgetExhausted&) {
            throw;
        } catch (const Error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    });
}

struct ImproveParams {
    std::size_t max_depth = 0; // 0: climb until no neighbour improves
    unsigned jobs = 1;
};

template <class Solution>
struct Improvement {
    Solution solution;
    double score;
    std::size_t depth = 0;
};

/// Steepest-ascent hill climb over sampled neighbourhoods. Every evaluated
/// neighbour competes for its archive bin; the climb moves only on strict
/// improvement and stops at a local maximum, the depth cap, or the budget.
template <class Space>
Improvement<typename Space::Solution> improve_workspace(const Space& space, const typename Space::Solution& w,
                                                        double score, const Objective<typename Space::Solution>& f,
                                                        Archive<typename Space::Solution>& archive, EvalBudget& budget,
                                                        Rng& rng, const ImproveParams& params = {}) {
    Improvement<typename Space::Solution> cur{w, score, 0};
    while (params.max_depth == 0 || cur.depth < params.max_depth) {
        if (budget.exhausted()) break;
        auto candidates = space.perturb(cur.solution, rng);
        if (candidates.size() > budget.remaining()) candidates.resize(budget.remaining());
        if (candidates.empty()) break;
        const auto scores = evaluate_batch(candidates, f, budget, params.jobs);
        std::size_t best = candidates.size();
        double best_score = cur.score;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (std::isnan(scores[i])) continue;
            archive.insert(space.measures(candidates[i]), candidates[i], scores[i]);
            if (scores[i] > best_score) {
                best_score = scores[i];
                best = i;
            }
        }
        if (best == candidates.size()) break;
        cur.solution = std::move(candidates[best]);
        cur.score = best_score;
        ++cur.depth;
    }
    return cur;
}

struct MapElitesParams {
    std::size_t iterations = 2000;     // N
    std::size_t init_iterations = 1000; // N_init
    std::size_t max_evaluations = 0;   // 0: unlimited
    ImproveParams improve{};
};

template <class Solution>
struct MapElitesResult {
    Archive<Solution> archive;
    Solution best;
    double best_score;
    std::size_t evaluations = 0;
    std::vector<double> best_log;        // global best after each iteration
    std::vector<std::size_t> filled_log; // archive size after each iteration
};

/// Random initialisation followed by uniform archive selection and
/// improve_workspace. Stops early only when the evaluation budget is spent.
template <class Space>
MapElitesResult<typename Space::Solution> map_elites(const Space& space, const Objective<typename Space::Solution>& f,
                                                     const MapElitesParams& params, Rng& rng) {
    using S = typename Space::Solution;
    if (params.init_iterations == 0 || params.iterations < params.init_iterations)
        throw InvalidArgument("map_elites needs N >= N_init >= 1");
    EvalBudget budget(params.max_evaluations);
    Archive<S> archive(space.dims());
    std::vector<double> best_log;
    std::vector<std::size_t> filled_log;
    double best = -std::numeric_limits<double>::infinity();

    std::vector<S> init;
    init.reserve(params.init_iterations);
    for (std::size_t i = 0; i < params.init_iterations; ++i) init.push_back(space.random(rng));
    if (init.size() > budget.remaining()) init.resize(budget.remaining());
    const auto scores = evaluate_batch(init, f, budget, params.improve.jobs);
    for (std::size_t i = 0; i < init.size(); ++i) {
        if (!std::isnan(scores[i])) {
            archive.insert(space.measures(init[i]), init[i], scores[i]);
            best = std::max(best, scores[i]);
        }
        best_log.push_back(best);
        filled_log.push_back(archive.size());
    }
    if (archive.empty()) throw Error("archive is empty after initialisation");

    for (std::size_t it = params.init_iterations; it < params.iterations && !budget.exhausted(); ++it) {
        const auto elite = archive.random_elite(rng);
        improve_workspace(space, elite.solution, elite.score, f, archive, budget, rng, params.improve);
        best_log.push_back(archive.best().score);
        filled_log.push_back(archive.size());
    }
    auto top = archive.best();
    return {std::move(archive), std::move(top.solution), top.score, budget.used(), std::move(best_log),
            std::move(filled_log)};
}

} // namespace wsopt
