#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/qd/differential_evolution.hpp"
#include "wsopt/qd/map_elites.hpp"

namespace wsopt {

struct NSLCParams {
    std::size_t population = 20;
    std::size_t generations = 10;   // extended while an evaluation budget remains
    std::size_t neighbours = 5;     // k
    double initial_threshold = 0.1; // novelty needed to enter the archive
    std::size_t archive_cap = 500;  // oldest entries are evicted first
    std::size_t max_evaluations = 0; // 0: population * generations
    unsigned jobs = 1;
};

struct NoveltyScore {
    double novelty = 0.0;
    std::size_t competition = 0; // neighbours with strictly lower fitness
};

/// Novelty and local competition of each member of `pool` against the pool
/// (itself excluded) plus the archive. The neighbourhood is the k nearest
/// behaviours together with every further point tied with the k-th distance.
inline std::vector<NoveltyScore> novelty_scores(const std::vector<std::vector<double>>& pool_behaviour,
                                                const std::vector<double>& pool_fitness,
                                                const std::vector<std::vector<double>>& archive_behaviour,
                                                const std::vector<double>& archive_fitness, std::size_t k) {
    const std::size_t n = pool_behaviour.size();
    std::vector<NoveltyScore> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, double>> nb; // (distance, fitness)
        auto dist = [&](const std::vector<double>& b) {
            double s = 0.0;
            for (std::size_t d = 0; d < b.size(); ++d) s += (b[d] - pool_behaviour[i][d]) * (b[d] - pool_behaviour[i][d]);
            return std::sqrt(s);
        };
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) nb.emplace_back(dist(pool_behaviour[j]), pool_fitness[j]);
        for (std::size_t j = 0; j < archive_behaviour.size(); ++j) nb.emplace_back(dist(archive_behaviour[j]), archive_fitness[j]);
        if (nb.empty()) continue;
        std::sort(nb.begin(), nb.end(), [](auto& a, auto& b) { return a.first < b.first; });
        std::size_t m = std::min(k, nb.size());
        while (m < nb.size() && nb[m].first == nb[m - 1].first) ++m;
        double total = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            total += nb[j].first;
            out[i].competition += nb[j].second < pool_fitness[i];
        }
        out[i].novelty = total / static_cast<double>(m);
    }
    return out;
}

/// Survivor order: non-dominated fronts over (novelty, local competition);
/// inside a front, larger crowding distance first, then higher fitness,
/// then lower index.
inline std::vector<std::size_t> nslc_rank(const std::vector<NoveltyScore>& scores, const std::vector<double>& fitness) {
    const std::size_t n = scores.size();
    auto dominates = [&](std::size_t a, std::size_t b) {
        const auto &x = scores[a], &y = scores[b];
        return x.novelty >= y.novelty && x.competition >= y.competition &&
               (x.novelty > y.novelty || x.competition > y.competition);
    };
    std::vector<std::size_t> order, left(n);
    std::iota(left.begin(), left.end(), 0);
    std::vector<double> crowd(n, 0.0);
    while (!left.empty()) {
        std::vector<std::size_t> front, rest;
        for (std::size_t a : left) {
            bool dominated = false;
            for (std::size_t b : left)
                if (dominates(b, a)) {
                    dominated = true;
                    break;
                }
            (dominated ? rest : front).push_back(a);
        }
        const auto objective = [&](std::size_t i, int m) {
            return m == 0 ? scores[i].novelty : static_cast<double>(scores[i].competition);
        };
        for (int m = 0; m < 2; ++m) {
            std::vector<std::size_t> f = front;
            std::stable_sort(f.begin(), f.end(), [&](std::size_t a, std::size_t b) { return objective(a, m) < objective(b, m); });
            const double span = objective(f.back(), m) - objective(f.front(), m);
            crowd[f.front()] = crowd[f.back()] = std::numeric_limits<double>::infinity();
            if (!(span > 0.0)) continue;
            for (std::size_t j = 1; j + 1 < f.size(); ++j)
                crowd[f[j]] += (objective(f[j + 1], m) - objective(f[j - 1], m)) / span;
        }
        std::stable_sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
            if (crowd[a] != crowd[b]) return crowd[a] > crowd[b];
            return fitness[a] > fitness[b];
        });
        order.insert(order.end(), front.begin(), front.end());
        left = std::move(rest);
    }
    return order;
}

/// Novelty search with local competition, (mu + lambda) with lambda = mu.
/// Each offspring is one valid mutation of a uniformly chosen parent. Once
/// the configured generations are done, further generations run until an
/// explicit evaluation budget is spent; the last one may be partial.
template <class Space>
DomainResult<typename Space::Solution> novelty_search_lc(const Space& space, const Objective<typename Space::Solution>& f,
                                                         const NSLCParams& params, Rng& rng,
                                                         std::size_t* archive_peak = nullptr) {
    using S = typename Space::Solution;
    if (params.population < 2) throw InvalidArgument("NSLC needs a population of at least 2");
    if (params.neighbours == 0) throw InvalidArgument("NSLC needs k >= 1");
    EvalBudget budget(params.max_evaluations == 0 ? params.population * params.generations : params.max_evaluations);
    auto fit_of = [](double v) { return std::isnan(v) ? -std::numeric_limits<double>::infinity() : v; };

    std::vector<S> pop;
    for (std::size_t i = 0; i < params.population; ++i) pop.push_back(space.random(rng));
    if (pop.size() > budget.remaining()) pop.resize(budget.remaining());
    if (pop.empty()) throw InvalidArgument("NSLC budget is empty");
    std::vector<double> fit = evaluate_batch(pop, f, budget, params.jobs);
    for (double& v : fit) v = fit_of(v);

    DomainResult<S> res{pop[0], fit[0], 0, {}};
    auto track = [&](const std::vector<S>& xs, const std::vector<double>& fs) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            if (fs[i] > res.best_score) {
                res.best = xs[i];
                res.best_score = fs[i];
            }
    };
    track(pop, fit);
    res.best_log.push_back(res.best_score);

    std::deque<std::vector<double>> arch_b;
    std::deque<double> arch_f;
    double threshold = params.initial_threshold;
    std::size_t peak = 0;
    std::size_t generation = 1;
    while (!budget.exhausted() && (params.max_evaluations != 0 || generation < params.generations)) {
        std::vector<S> kids;
        const std::size_t want = std::min(params.population, budget.remaining());
        for (std::size_t i = 0; i < want; ++i) {
            const S& parent = pop[uniform_index(rng, pop.size())];
            auto m = space.mutate(parent, rng);
            kids.push_back(m ? std::move(*m) : parent);
        }
        std::vector<double> kf = evaluate_batch(kids, f, budget, params.jobs);
        for (double& v : kf) v = fit_of(v);
        track(kids, kf);

        std::vector<S> pool = pop;
        std::vector<double> pf = fit;
        pool.insert(pool.end(), kids.begin(), kids.end());
        pf.insert(pf.end(), kf.begin(), kf.end());
        std::vector<std::vector<double>> pb;
        for (const S& s : pool) pb.push_back(space.behavior(s));
        const std::vector<std::vector<double>> ab(arch_b.begin(), arch_b.end());
        const std::vector<double> af(arch_f.begin(), arch_f.end());
        const auto scores = novelty_scores(pb, pf, ab, af, params.neighbours);

        std::size_t added = 0;
        for (std::size_t i = pop.size(); i < pool.size(); ++i)
            if (scores[i].novelty > threshold) {
                arch_b.push_back(pb[i]);
                arch_f.push_back(pf[i]);
                ++added;
                if (arch_b.size() > params.archive_cap) {
                    arch_b.pop_front();
                    arch_f.pop_front();
                }
            }
        if (added > 4) threshold *= 1.2;
        if (added == 0) threshold *= 0.95;
        peak = std::max(peak, arch_b.size());

        const auto order = nslc_rank(scores, pf);
        std::vector<S> next;
        std::vector<double> nf;
        for (std::size_t j = 0; j < params.population && j < order.size(); ++j) {
            next.push_back(pool[order[j]]);
            nf.push_back(pf[order[j]]);
        }
        pop = std::move(next);
        fit = std::move(nf);
        res.best_log.push_back(res.best_score);
        ++generation;
    }
    if (archive_peak) *archive_peak = peak;
    res.evaluations = budget.used();
    return res;
}

} // namespace wsopt
