#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/env/tabletop_scene.hpp"
#include "wsopt/env/task_graph.hpp"
#include "wsopt/env/validate.hpp"
#include "wsopt/qd/archive.hpp"
#include "wsopt/qd/measures.hpp"

namespace wsopt {

/// Eight cubes in two labelled rows: squares 0-3 in front, triangles 4-7
/// behind them.
inline TabletopScene tabletop_baseline() {
    TabletopScene s;
    const double xs[4] = {0.18, 0.26, 0.34, 0.42};
    for (int i = 0; i < 4; ++i) s.cubes.push_back({i, "square", {xs[i], 0.26}});
    for (int i = 0; i < 4; ++i) s.cubes.push_back({4 + i, "triangle", {xs[i], 0.34}});
    return s;
}

/// All squares are placed before any triangle.
inline TaskGraph tabletop_task() {
    std::map<GoalId, std::string> names;
    for (int i = 0; i < 8; ++i) names[i] = (i < 4 ? "square" : "triangle") + std::to_string(i);
    return two_column_task({0, 1, 2, 3}, {4, 5, 6, 7}, std::move(names));
}

struct TabletopSpaceParams {
    TabletopScene base = tabletop_baseline();
    bool move_cubes = true;
    bool add_barriers = true;
    bool random_init = true; // false: every initial sample is `base`
    std::size_t fan_out = 16;
    double move_sd = 0.07;
    std::size_t max_barriers = 6;
    std::size_t max_rejections = 100000;
    double distance_max = 0.40;
    std::size_t distance_bins = 20;
    std::size_t order_bins = 64;
};

/// Tabletop scenes as a search space. Cube ids and labels always come from
/// the base scene; only positions and barriers vary.
class TabletopSpace {
public:
    using Solution = TabletopScene;

    explicit TabletopSpace(TabletopSpaceParams params = {}) : p_(std::move(params)) {
        if (p_.base.cubes.size() < 2) throw InvalidArgument("tabletop space needs at least two cubes");
        if (!p_.move_cubes && !p_.add_barriers) throw InvalidArgument("tabletop space has no perturbation enabled");
        if (!validate(p_.base).ok()) throw InvalidArgument("base scene is invalid: " + validate(p_.base).to_string());
    }

    const TabletopSpaceParams& params() const { return p_; }

    /// Uniform non-overlapping cube positions without barriers, or the base
    /// scene when random initialisation is off.
    TabletopScene random(Rng& rng) const {
        if (!p_.random_init) {
            TabletopScene s = p_.base;
            s.barriers.clear();
            return s;
        }
        const Bounds& b = p_.base.bounds;
        for (std::size_t attempt = 0; attempt < p_.max_rejections; ++attempt) {
            TabletopScene s = p_.base;
            s.barriers.clear();
            for (Cube& c : s.cubes) c.position = {uniform(rng, b.min_x, b.max_x), uniform(rng, b.min_y, b.max_y)};
            if (validate(s).ok()) return s;
        }
        throw BudgetExhausted("no valid tabletop scene within the rejection budget");
    }

    std::vector<TabletopScene> perturb(const TabletopScene& s, Rng& rng) const {
        std::vector<TabletopScene> out;
        for (std::size_t i = 0; i < p_.fan_out; ++i)
            if (auto c = neighbour(s, rng)) out.push_back(std::move(*c));
        return out;
    }

    std::optional<TabletopScene> mutate(const TabletopScene& s, Rng& rng, std::size_t tries = 64) const {
        for (std::size_t i = 0; i < tries; ++i)
            if (auto c = neighbour(s, rng)) return c;
        return std::nullopt;
    }

    std::vector<std::size_t> dims() const { return {p_.distance_bins, p_.order_bins}; }

    /// (minimum centre distance between cubes, rank of the cube order along x).
    Bin measures(const TabletopScene& s) const {
        return {value_bin(min_cube_distance(s), 0.0, p_.distance_max, p_.distance_bins),
                rank_bin(x_order_rank(s), factorial(s.cubes.size()), p_.order_bins)};
    }

    std::vector<double> behavior(const TabletopScene& s) const {
        const Bin b = measures(s);
        return {static_cast<double>(b[0]) / static_cast<double>(p_.distance_bins - 1),
                static_cast<double>(b[1]) / static_cast<double>(p_.order_bins - 1)};
    }

    static double min_cube_distance(const TabletopScene& s) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < s.cubes.size(); ++i)
            for (std::size_t j = i + 1; j < s.cubes.size(); ++j)
                best = std::min(best, distance(s.cubes[i].position, s.cubes[j].position));
        return best;
    }

    /// Cubes indexed by ascending id, sorted by x (ties by id), ranked.
    static std::uint64_t x_order_rank(const TabletopScene& s) {
        std::vector<std::size_t> by_id(s.cubes.size());
        std::iota(by_id.begin(), by_id.end(), 0);
        std::sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) { return s.cubes[a].id < s.cubes[b].id; });
        std::vector<std::size_t> label(s.cubes.size());
        for (std::size_t r = 0; r < by_id.size(); ++r) label[by_id[r]] = r;
        std::vector<std::size_t> order(s.cubes.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double xa = s.cubes[a].position.x, xb = s.cubes[b].position.x;
            return xa != xb ? xa < xb : s.cubes[a].id < s.cubes[b].id;
        });
        std::vector<std::size_t> perm;
        for (std::size_t i : order) perm.push_back(label[i]);
        return permutation_rank(perm);
    }

    // Real encoding: (x, y) per cube in base order. Barriers are not encoded.
    std::size_t encoding_size() const { return 2 * p_.base.cubes.size(); }

    std::vector<double> lower() const {
        std::vector<double> v;
        for (std::size_t i = 0; i < p_.base.cubes.size(); ++i) v.insert(v.end(), {p_.base.bounds.min_x, p_.base.bounds.min_y});
        return v;
    }

    std::vector<double> upper() const {
        std::vector<double> v;
        for (std::size_t i = 0; i < p_.base.cubes.size(); ++i) v.insert(v.end(), {p_.base.bounds.max_x, p_.base.bounds.max_y});
        return v;
    }

    std::vector<double> encode(const TabletopScene& s) const {
        std::vector<double> x;
        for (const Cube& c : s.cubes) x.insert(x.end(), {c.position.x, c.position.y});
        return x;
    }

    std::optional<TabletopScene> decode(std::span<const double> x) const {
        if (x.size() != encoding_size()) throw InvalidArgument("encoding has the wrong length");
        TabletopScene s = p_.base;
        s.barriers.clear();
        for (std::size_t i = 0; i < s.cubes.size(); ++i) s.cubes[i].position = {x[2 * i], x[2 * i + 1]};
        if (!validate(s).ok()) return std::nullopt;
        return s;
    }

private:
    std::optional<TabletopScene> neighbour(const TabletopScene& s, Rng& rng) const {
        const bool can_move = p_.move_cubes;
        const bool can_block = p_.add_barriers && s.barriers.size() < p_.max_barriers;
        if (!can_move && !can_block) return std::nullopt;
        const bool move = can_move && (!can_block || bernoulli(rng, 0.5));
        TabletopScene c = s;
        if (move) {
            Cube& cube = c.cubes[uniform_index(rng, c.cubes.size())];
            cube.position = {normal(rng, cube.position.x, p_.move_sd), normal(rng, cube.position.y, p_.move_sd)};
        } else {
            const std::size_t a = uniform_index(rng, c.cubes.size());
            std::size_t b = uniform_index(rng, c.cubes.size() - 1);
            if (b >= a) ++b;
            c.barriers.push_back(barrier_between(c.cubes[a].position, c.cubes[b].position));
        }
        if (!validate(c).ok()) return std::nullopt;
        return c;
    }

    TabletopSpaceParams p_;
};

} // namespace wsopt
