#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/env/grid_layout.hpp"
#include "wsopt/env/validate.hpp"
#include "wsopt/qd/archive.hpp"
#include "wsopt/qd/measures.hpp"

namespace wsopt {

struct GridSpaceParams {
    int width = 7;
    int height = 7;
    double obstacle_probability = 0.2;
    std::size_t fan_out = 24;
    std::size_t max_rejections = 100000;
    std::size_t obstacle_cap = 15; // counts above the cap share one overflow bin
    std::size_t order_bins = 24;
    GridRules rules{};
};

/// Marks each interior floor cell as a virtual obstacle with probability p.
inline void sample_obstacles(GridLayout& g, double p, Rng& rng) {
    for (int y = 1; y + 1 < g.height(); ++y)
        for (int x = 1; x + 1 < g.width(); ++x) g.set({x, y}, bernoulli(rng, p) ? Cell::obstacle() : Cell::floor());
}

/// Kitchen layouts as a search space: generators, perturbations, archive
/// measures and a fixed-length real encoding.
class GridSpace {
public:
    using Solution = GridLayout;

    explicit GridSpace(GridSpaceParams params = {}) : p_(params) {
        const GridLayout probe = GridLayout::kitchen(p_.width, p_.height);
        slots_ = probe.station_slots();
        if (slots_.size() < kStationCount) throw InvalidArgument("grid too small for seven stations");
    }

    const GridSpaceParams& params() const { return p_; }
    const std::vector<GridPos>& slots() const { return slots_; }

    /// Stations on distinct random slots, interior obstacles with the
    /// configured probability; the whole draw is repeated until valid.
    GridLayout random(Rng& rng) const {
        for (std::size_t attempt = 0; attempt < p_.max_rejections; ++attempt) {
            GridLayout g = GridLayout::kitchen(p_.width, p_.height);
            std::vector<GridPos> pick = slots_;
            for (std::size_t i = 0; i < kStationCount; ++i)
                std::swap(pick[i], pick[i + uniform_index(rng, pick.size() - i)]);
            bool spaced = true;
            for (std::size_t i = 0; i < kStationCount && spaced; ++i)
                for (std::size_t j = i + 1; j < kStationCount && spaced; ++j)
                    spaced = g.perimeter_distance(pick[i], pick[j]) >= p_.rules.min_station_spacing;
            if (!spaced) continue;
            for (std::size_t i = 0; i < kStationCount; ++i) g.set(pick[i], Cell::make_station(kAllStations[i]));
            sample_obstacles(g, p_.obstacle_probability, rng);
            if (validate(g, p_.rules).ok()) return g;
        }
        throw BudgetExhausted("no valid kitchen layout within the rejection budget");
    }

    /// Up to fan_out valid neighbours: station moves to empty counters,
    /// station swaps, obstacle insertions and removals.
    std::vector<GridLayout> perturb(const GridLayout& g, Rng& rng) const {
        std::vector<GridLayout> out;
        for (std::size_t i = 0; i < p_.fan_out; ++i)
            if (auto c = neighbour(g, rng)) out.push_back(std::move(*c));
        return out;
    }

    /// One valid neighbour, or nullopt after a bounded number of tries.
    std::optional<GridLayout> mutate(const GridLayout& g, Rng& rng, std::size_t tries = 64) const {
        for (std::size_t i = 0; i < tries; ++i)
            if (auto c = neighbour(g, rng)) return c;
        return std::nullopt;
    }

    std::vector<std::size_t> dims() const { return {p_.obstacle_cap + 2, p_.order_bins}; }

    /// (obstacle count, bin of the lexicographic rank of the station order
    /// read top-to-bottom, left-to-right).
    Bin measures(const GridLayout& g) const {
        const auto count = static_cast<std::size_t>(g.obstacle_count());
        return {std::min(count, p_.obstacle_cap + 1), rank_bin(station_order_rank(g), factorial(kStationCount), p_.order_bins)};
    }

    std::vector<double> behavior(const GridLayout& g) const {
        const Bin b = measures(g);
        const auto d = dims();
        return {static_cast<double>(b[0]) / static_cast<double>(d[0] - 1),
                static_cast<double>(b[1]) / static_cast<double>(d[1] - 1)};
    }

    static std::uint64_t station_order_rank(const GridLayout& g) {
        std::vector<std::size_t> perm;
        for (auto [kind, _] : g.stations()) perm.push_back(static_cast<std::size_t>(kind));
        if (perm.size() != kStationCount) throw InvalidArgument("layout must hold each station exactly once");
        return permutation_rank(perm);
    }

    // Real encoding: one slot coordinate per station kind in [0, #slots),
    // then one value in [0, 1] per interior cell, an obstacle iff it is at
    // least 1 - obstacle_probability.
    std::size_t encoding_size() const { return kStationCount + interior_cells(); }

    std::vector<double> lower() const { return std::vector<double>(encoding_size(), 0.0); }

    std::vector<double> upper() const {
        std::vector<double> u(encoding_size(), 1.0);
        for (std::size_t i = 0; i < kStationCount; ++i) u[i] = static_cast<double>(slots_.size());
        return u;
    }

    std::vector<double> encode(const GridLayout& g) const {
        std::vector<double> x;
        x.reserve(encoding_size());
        for (StationKind k : kAllStations) {
            const GridPos p = g.station(k);
            const auto it = std::find(slots_.begin(), slots_.end(), p);
            if (it == slots_.end()) throw InvalidArgument("station off the slot ring");
            x.push_back(static_cast<double>(it - slots_.begin()) + 0.5);
        }
        const double on = 1.0 - p_.obstacle_probability / 2.0, off = (1.0 - p_.obstacle_probability) / 2.0;
        for (int y = 1; y + 1 < g.height(); ++y)
            for (int x0 = 1; x0 + 1 < g.width(); ++x0) x.push_back(g.at({x0, y}).kind == CellKind::obstacle ? on : off);
        return x;
    }

    /// Decoded layout, or nullopt when two stations share a slot or the
    /// result violates a layout rule.
    std::optional<GridLayout> decode(std::span<const double> x) const {
        if (x.size() != encoding_size()) throw InvalidArgument("encoding has the wrong length");
        GridLayout g = GridLayout::kitchen(p_.width, p_.height);
        for (std::size_t i = 0; i < kStationCount; ++i) {
            const auto s = std::min(slots_.size() - 1, static_cast<std::size_t>(std::max(0.0, std::floor(x[i]))));
            if (g.at(slots_[s]).kind == CellKind::station) return std::nullopt;
            g.set(slots_[s], Cell::make_station(kAllStations[i]));
        }
        std::size_t k = kStationCount;
        for (int y = 1; y + 1 < g.height(); ++y)
            for (int x0 = 1; x0 + 1 < g.width(); ++x0)
                if (x[k++] >= 1.0 - p_.obstacle_probability) g.set({x0, y}, Cell::obstacle());
        if (!validate(g, p_.rules).ok()) return std::nullopt;
        return g;
    }

private:
    std::size_t interior_cells() const {
        return static_cast<std::size_t>(std::max(0, p_.width - 2) * std::max(0, p_.height - 2));
    }

    std::optional<GridLayout> neighbour(const GridLayout& g, Rng& rng) const {
        const auto stations = g.stations();
        std::vector<GridPos> free_slots, floor_cells, obstacles;
        for (GridPos s : slots_)
            if (g.at(s).kind == CellKind::counter) free_slots.push_back(s);
        for (int y = 1; y + 1 < g.height(); ++y)
            for (int x = 1; x + 1 < g.width(); ++x) {
                const CellKind k = g.at({x, y}).kind;
                if (k == CellKind::floor) floor_cells.push_back({x, y});
                if (k == CellKind::obstacle) obstacles.push_back({x, y});
            }
        std::vector<int> kinds;
        if (!free_slots.empty() && !stations.empty()) kinds.push_back(0);
        if (stations.size() >= 2) kinds.push_back(1);
        if (!floor_cells.empty()) kinds.push_back(2);
        if (!obstacles.empty()) kinds.push_back(3);
        if (kinds.empty()) return std::nullopt;
        GridLayout c = g;
        switch (kinds[uniform_index(rng, kinds.size())]) {
        case 0: {
            const auto& [kind, from] = stations[uniform_index(rng, stations.size())];
            c.set(from, Cell::counter());
            c.set(free_slots[uniform_index(rng, free_slots.size())], Cell::make_station(kind));
            break;
        }
        case 1: {
            const std::size_t a = uniform_index(rng, stations.size());
            std::size_t b = uniform_index(rng, stations.size() - 1);
            if (b >= a) ++b;
            c.set(stations[a].second, Cell::make_station(stations[b].first));
            c.set(stations[b].second, Cell::make_station(stations[a].first));
            break;
        }
        case 2: c.set(floor_cells[uniform_index(rng, floor_cells.size())], Cell::obstacle()); break;
        default: c.set(obstacles[uniform_index(rng, obstacles.size())], Cell::floor()); break;
        }
        if (!validate(c, p_.rules).ok()) return std::nullopt;
        return c;
    }

    GridSpaceParams p_;
    std::vector<GridPos> slots_;
};

} // namespace wsopt
