#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "wsopt/core/random.hpp"
#include "wsopt/eval/metrics.hpp"
#include "wsopt/qd/differential_evolution.hpp"
#include "wsopt/qd/grid_space.hpp"
#include "wsopt/qd/map_elites.hpp"
#include "wsopt/qd/nslc.hpp"
#include "wsopt/qd/objectives.hpp"

namespace wsopt {

inline constexpr std::array<const char*, 3> kOptimizerNames = {"map-elites", "nslc", "de"};

struct GridSize {
    int width = 7, height = 7;
    std::string label() const { return std::to_string(width) + "x" + std::to_string(height); }
    friend bool operator==(const GridSize&, const GridSize&) = default;
};

inline std::vector<GridSize> default_grid_sizes() { return {{5, 5}, {7, 7}, {9, 9}, {9, 5}}; }

struct CompareParams {
    std::size_t init_iterations = 200;
    std::size_t iterations = 400;
    std::size_t de_population = 20;
    NSLCParams nslc;
    GridSpaceParams space;
    LegibilityConfig legibility;
    unsigned jobs = 1;
};

/// One run per (size, seed, optimizer). MAP-Elites runs first; its
/// evaluation count becomes the budget of DE and NSLC.
struct CompareRun {
    GridSize size;
    std::uint64_t seed = 0;
    std::string optimizer;
    double best = 0.0;
    std::size_t evaluations = 0;
};

struct CompareCell {
    GridSize size;
    std::string optimizer;
    std::vector<double> best;
    MeanSd stats;
};

struct CompareReport {
    std::vector<GridSize> sizes;
    std::vector<std::uint64_t> seeds;
    std::vector<CompareRun> runs;
    std::vector<CompareCell> cells; // size-major, optimizers in kOptimizerNames order

    const CompareCell& cell(const std::string& optimizer, GridSize size) const {
        for (const auto& c : cells)
            if (c.optimizer == optimizer && c.size == size) return c;
        throw InvalidArgument("no cell " + optimizer + " " + size.label());
    }
};

/// Best task legibility of the three optimizers on each grid size under
/// matched evaluation budgets. `progress`, when set, sees every run.
inline CompareReport compare_optimizers(const std::vector<GridSize>& sizes, const std::vector<std::uint64_t>& seeds,
                                        const TaskGraph& task, const CompareParams& params,
                                        const std::function<void(const CompareRun&)>& progress = {}) {
    if (sizes.empty() || seeds.empty()) throw InvalidArgument("need at least one size and one seed");
    const WorkspaceObjective<GridLayout> objective(task, params.legibility);
    const auto f = objective.make(ObjectiveKind::legible);
    CompareReport out;
    out.sizes = sizes;
    out.seeds = seeds;
    for (std::size_t si = 0; si < sizes.size(); ++si) {
        GridSpaceParams sp = params.space;
        sp.width = sizes[si].width;
        sp.height = sizes[si].height;
        const GridSpace space(sp);
        for (std::uint64_t seed : seeds) {
            const std::uint64_t base = derive_seed(seed, static_cast<std::uint64_t>(sizes[si].width),
                                                   static_cast<std::uint64_t>(sizes[si].height));
            auto record = [&](const char* name, double best, std::size_t evals) {
                out.runs.push_back({sizes[si], seed, name, best, evals});
                if (progress) progress(out.runs.back());
            };
            MapElitesParams mp;
            mp.init_iterations = params.init_iterations;
            mp.iterations = params.iterations;
            mp.improve.jobs = params.jobs;
            Rng me_rng = make_rng(base, 0);
            const auto me = map_elites(space, f, mp, me_rng);
            record(kOptimizerNames[0], me.best_score, me.evaluations);

            NSLCParams np = params.nslc;
            np.max_evaluations = me.evaluations;
            np.jobs = params.jobs;
            Rng nslc_rng = make_rng(base, 1);
            const auto ns = novelty_search_lc(space, f, np, nslc_rng);
            record(kOptimizerNames[1], ns.best_score, ns.evaluations);

            DEParams dp;
            dp.population = params.de_population;
            dp.max_evaluations = me.evaluations;
            dp.jobs = params.jobs;
            Rng de_rng = make_rng(base, 2);
            const auto de = differential_evolution(space, f, dp, de_rng);
            record(kOptimizerNames[2], de.best_score, de.evaluations);
        }
    }
    for (const GridSize& s : sizes)
        for (const char* name : kOptimizerNames) {
            CompareCell c;
            c.size = s;
            c.optimizer = name;
            for (const auto& r : out.runs)
                if (r.size == s && r.optimizer == name) c.best.push_back(r.best);
            c.stats = mean_sd(c.best);
            out.cells.push_back(std::move(c));
        }
    return out;
}

} // namespace wsopt
