#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/env/geometry.hpp"

namespace wsopt {

struct DtwResult {
    double cost = 0.0;
    std::vector<std::pair<std::size_t, std::size_t>> path; // (query index, reference index), both increasing
};

/// Classic DTW with Euclidean point cost and steps (1,0), (0,1), (1,1).
/// Backtracking prefers the diagonal, then the query step, then the
/// reference step.
inline DtwResult dtw(std::span<const Vec2> query, std::span<const Vec2> reference) {
    const std::size_t n = query.size(), m = reference.size();
    if (n == 0 || m == 0) throw InvalidArgument("DTW needs non-empty sequences");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d((n + 1) * (m + 1), inf);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * (m + 1) + j]; };
    at(0, 0) = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= m; ++j)
            at(i, j) = distance(query[i - 1], reference[j - 1]) + std::min({at(i - 1, j - 1), at(i - 1, j), at(i, j - 1)});
    DtwResult r;
    r.cost = at(n, m);
    std::size_t i = n, j = m;
    while (true) {
        r.path.emplace_back(i - 1, j - 1);
        if (i == 1 && j == 1) break;
        const double diag = at(i - 1, j - 1), up = at(i - 1, j), left = at(i, j - 1);
        if (diag <= up && diag <= left) {
            --i;
            --j;
        } else if (up <= left) {
            --i;
        } else {
            --j;
        }
    }
    std::reverse(r.path.begin(), r.path.end());
    return r;
}

/// Warps `query` onto the time base of `reference`: sample k is the mean of
/// the query points DTW matches to reference point k.
inline std::vector<Vec2> dtw_align(std::span<const Vec2> query, std::span<const Vec2> reference) {
    if (query.size() < 2) throw InvalidArgument("cannot align a single-point trajectory");
    const DtwResult r = dtw(query, reference);
    std::vector<Vec2> sum(reference.size(), Vec2{0.0, 0.0});
    std::vector<std::size_t> count(reference.size(), 0);
    for (auto [i, j] : r.path) {
        sum[j] = sum[j] + query[i];
        ++count[j];
    }
    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] = sum[k] * (1.0 / static_cast<double>(count[k]));
    return sum;
}

/// K points equally spaced in arc length, endpoints included.
inline std::vector<Vec2> resample_arclength(std::span<const Vec2> points, std::size_t k) {
    if (points.size() < 2) throw InvalidArgument("cannot resample a single-point trajectory");
    if (k < 2) throw InvalidArgument("resampling needs at least two samples");
    std::vector<double> s(points.size(), 0.0);
    for (std::size_t i = 1; i < points.size(); ++i) s[i] = s[i - 1] + distance(points[i - 1], points[i]);
    const double total = s.back();
    std::vector<Vec2> out;
    out.reserve(k);
    std::size_t seg = 0;
    for (std::size_t q = 0; q < k; ++q) {
        const double target = total * static_cast<double>(q) / static_cast<double>(k - 1);
        if (q + 1 == k || total == 0.0) {
            out.push_back(q + 1 == k ? points.back() : points.front());
            continue;
        }
        while (seg + 2 < points.size() && s[seg + 1] < target) ++seg;
        const double len = s[seg + 1] - s[seg];
        const double t = len > 0.0 ? std::clamp((target - s[seg]) / len, 0.0, 1.0) : 0.0;
        out.push_back(lerp(points[seg], points[seg + 1], t));
    }
    return out;
}

/// Index of the sequence with the smallest summed DTW cost to all others;
/// ties go to the lowest index.
inline std::size_t dtw_medoid(const std::vector<std::vector<Vec2>>& set) {
    if (set.empty()) throw InvalidArgument("medoid of an empty set");
    const std::size_t n = set.size();
    std::vector<double> total(n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            const double c = dtw(set[a], set[b]).cost;
            total[a] += c;
            total[b] += c;
        }
    return static_cast<std::size_t>(std::min_element(total.begin(), total.end()) - total.begin());
}

} // namespace wsopt
