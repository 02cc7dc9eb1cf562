#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/parallel.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/qd/map_elites.hpp"

namespace wsopt {

struct DEParams {
    std::size_t population = 20;
    std::size_t generations = 200; // includes the initial population
    double weight = 0.5;           // F
    double crossover = 0.9;        // CR
    std::size_t max_evaluations = 0; // 0: population * generations
    unsigned jobs = 1;
};

struct DEResult {
    std::vector<double> best;
    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t evaluations = 0;
    std::size_t generations = 0;
    std::vector<double> best_log; // after each generation
};

using RealObjective = std::function<double(std::span<const double>)>;

/// DE/rand/1/bin maximising f over the box [lower, upper]. Generations are
/// synchronous: trials are built from the previous generation, evaluated as
/// a batch, and replace their target when at least as good. Mutants leaving
/// the box are reflected back inside. When `initial` is empty the first
/// population is uniform in the box.
inline DEResult differential_evolution(const RealObjective& f, const std::vector<double>& lower,
                                       const std::vector<double>& upper, const DEParams& params, Rng& rng,
                                       std::vector<std::vector<double>> initial = {}) {
    const std::size_t dim = lower.size();
    if (dim == 0 || upper.size() != dim) throw InvalidArgument("DE bounds are empty or mismatched");
    for (std::size_t d = 0; d < dim; ++d)
        if (!(lower[d] <= upper[d])) throw InvalidArgument("DE lower bound exceeds upper bound");
    if (params.population < 4) throw InvalidArgument("DE/rand/1 needs a population of at least 4");
    if (params.generations == 0) throw InvalidArgument("DE needs at least one generation");
    const std::size_t np = params.population;
    EvalBudget budget(params.max_evaluations == 0 ? np * params.generations : params.max_evaluations);

    auto eval = [&](const std::vector<std::vector<double>>& xs) {
        budget.charge(xs.size());
        return parallel_map<double>(xs.size(), params.jobs, [&](std::size_t i) {
            const double v = f(xs[i]);
            return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
        });
    };

    std::vector<std::vector<double>> pop = std::move(initial);
    if (pop.size() > np) pop.resize(np);
    for (auto& x : pop)
        if (x.size() != dim) throw InvalidArgument("DE initial member has the wrong dimension");
    while (pop.size() < np) {
        std::vector<double> x(dim);
        for (std::size_t d = 0; d < dim; ++d) x[d] = uniform(rng, lower[d], upper[d]);
        pop.push_back(std::move(x));
    }
    if (pop.size() > budget.remaining()) pop.resize(budget.remaining());
    if (pop.size() < 4) throw InvalidArgument("DE budget is smaller than a usable population");
    std::vector<double> fit = eval(pop);

    DEResult res;
    auto record = [&] {
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (res.best.empty() || fit[i] > res.best_score) {
                res.best = pop[i];
                res.best_score = fit[i];
            }
        res.best_log.push_back(res.best_score);
        ++res.generations;
    };
    record();

    const std::size_t n = pop.size();
    while (!budget.exhausted() && (params.max_evaluations != 0 || res.generations < params.generations)) {
        const std::size_t batch = std::min(n, budget.remaining());
        std::vector<std::vector<double>> trials(batch);
        for (std::size_t i = 0; i < batch; ++i) {
            std::size_t r[3];
            for (std::size_t k = 0; k < 3; ++k) {
                do r[k] = uniform_index(rng, n);
                while (r[k] == i || (k > 0 && r[k] == r[0]) || (k > 1 && r[k] == r[1]));
            }
            const std::size_t jrand = uniform_index(rng, dim);
            std::vector<double> t = pop[i];
            for (std::size_t d = 0; d < dim; ++d) {
                if (d != jrand && !(uniform01(rng) < params.crossover)) continue;
                double v = pop[r[0]][d] + params.weight * (pop[r[1]][d] - pop[r[2]][d]);
                if (v < lower[d]) v = std::min(upper[d], 2.0 * lower[d] - v);
                if (v > upper[d]) v = std::max(lower[d], 2.0 * upper[d] - v);
                t[d] = v;
            }
            trials[i] = std::move(t);
        }
        const auto tf = eval(trials);
        for (std::size_t i = 0; i < batch; ++i)
            if (tf[i] >= fit[i]) {
                pop[i] = std::move(trials[i]);
                fit[i] = tf[i];
            }
        record();
    }
    res.evaluations = budget.used();
    return res;
}

template <class Solution>
struct DomainResult {
    Solution best;
    double best_score;
    std::size_t evaluations = 0;
    std::vector<double> best_log;
};

/// DE on a search space's real encoding. The first population encodes
/// random valid workspaces; decodes that fail validation score -inf and
/// still count as objective calls.
template <class Space>
DomainResult<typename Space::Solution> differential_evolution(const Space& space,
                                                              const Objective<typename Space::Solution>& f,
                                                              const DEParams& params, Rng& rng) {
    std::vector<std::vector<double>> init;
    for (std::size_t i = 0; i < params.population; ++i) init.push_back(space.encode(space.random(rng)));
    const RealObjective g = [&](std::span<const double> x) {
        const auto s = space.decode(x);
        if (!s) return -std::numeric_limits<double>::infinity();
        try {
            return f(*s);
        } catch (const BudgetExhausted&) {
            throw;
        } catch (const Error&) {
            return -std::numeric_limits<double>::infinity();
        }
    };
    DEResult r = differential_evolution(g, space.lower(), space.upper(), params, rng, std::move(init));
    auto best = space.decode(r.best);
    if (!best) throw Error("differential evolution found no valid workspace");
    return {std::move(*best), r.best_score, r.evaluations, std::move(r.best_log)};
}

} // namespace wsopt
