#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"

namespace wsopt {

inline std::uint64_t factorial(std::size_t n) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= i;
    return f;
}

/// Lexicographic rank of a permutation of 0..n-1 (Lehmer code).
inline std::uint64_t permutation_rank(std::span<const std::size_t> perm) {
    const std::size_t n = perm.size();
    std::vector<char> used(n, 0);
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (perm[i] >= n || used[perm[i]]) throw InvalidArgument("not a permutation");
        std::size_t smaller = 0;
        for (std::size_t v = 0; v < perm[i]; ++v) smaller += !used[v];
        used[perm[i]] = 1;
        rank += smaller * factorial(n - 1 - i);
    }
    return rank;
}

/// Maps a rank in [0, total) onto `bins` equal-width bins.
inline std::size_t rank_bin(std::uint64_t rank, std::uint64_t total, std::size_t bins) {
    if (rank >= total) throw InvalidArgument("rank out of range");
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::size_t>((static_cast<u128>(rank) * bins) / total);
}

/// Bin of a continuous value on [lo, hi) with `bins` equal steps; values at or
/// beyond the edges land in the first / last bin.
inline std::size_t value_bin(double v, double lo, double hi, std::size_t bins) {
    if (!(v > lo)) return 0;
    const double t = (v - lo) / (hi - lo) * static_cast<double>(bins);
    if (t >= static_cast<double>(bins)) return bins - 1;
    return static_cast<std::size_t>(std::floor(t));
}

} // namespace wsopt
