#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/random.hpp"

namespace wsopt {

using Bin = std::vector<std::size_t>;

/// Behaviour-performance map: one elite per feature bin. A bin's score only
/// ever increases, and the (solution, score) pair is replaced under one lock.
template <class Solution>
class Archive {
public:
    struct Elite {
        Bin bin;
        Solution solution;
        double score;
    };

    explicit Archive(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) throw InvalidArgument("archive needs at least one feature dimension");
        for (std::size_t d : dims_)
            if (d == 0) throw InvalidArgument("feature dimension with zero bins");
    }

    Archive(const Archive& other) : dims_(other.dims_) {
        std::lock_guard lock(other.mutex_);
        cells_ = other.cells_;
        order_ = other.order_;
    }

    const std::vector<std::size_t>& dims() const { return dims_; }

    std::size_t capacity() const {
        std::size_t n = 1;
        for (std::size_t d : dims_) n *= d;
        return n;
    }

    std::size_t flat_index(const Bin& bin) const {
        if (bin.size() != dims_.size()) throw InvalidArgument("bin arity does not match archive");
        std::size_t idx = 0;
        for (std::size_t i = 0; i < dims_.size(); ++i) {
            if (bin[i] >= dims_[i]) throw InvalidArgument("feature value outside declared bins");
            idx = idx * dims_[i] + bin[i];
        }
        return idx;
    }

    /// Stores the candidate when its bin is empty or it strictly beats the
    /// current elite. Returns whether the archive changed.
    bool insert(const Bin& bin, const Solution& solution, double score) {
        const std::size_t key = flat_index(bin);
        if (std::isnan(score)) return false;
        std::lock_guard lock(mutex_);
        auto it = cells_.find(key);
        if (it == cells_.end()) {
            cells_.emplace(key, Elite{bin, solution, score});
            order_.push_back(key);
            return true;
        }
        if (!(score > it->second.score)) return false;
        it->second.solution = solution;
        it->second.score = score;
        return true;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return cells_.size();
    }
    bool empty() const { return size() == 0; }

    std::optional<Elite> at(const Bin& bin) const {
        const std::size_t key = flat_index(bin);
        std::lock_guard lock(mutex_);
        auto it = cells_.find(key);
        if (it == cells_.end()) return std::nullopt;
        return it->second;
    }

    /// Uniformly chosen elite (bins in first-filled order).
    Elite random_elite(Rng& rng) const {
        std::lock_guard lock(mutex_);
        if (order_.empty()) throw Error("archive is empty");
        return cells_.at(order_[uniform_index(rng, order_.size())]);
    }

    /// Highest-scoring elite; ties go to the lowest bin.
    Elite best() const {
        std::lock_guard lock(mutex_);
        if (cells_.empty()) throw Error("archive is empty");
        const Elite* best = nullptr;
        for (const auto& [_, e] : cells_)
            if (!best || e.score > best->score) best = &e;
        return *best;
    }

    /// Elites in bin order.
    std::vector<Elite> elites() const {
        std::lock_guard lock(mutex_);
        std::vector<Elite> out;
        out.reserve(cells_.size());
        for (const auto& [_, e] : cells_) out.push_back(e);
        return out;
    }

private:
    std::vector<std::size_t> dims_;
    std::map<std::size_t, Elite> cells_;
    std::vector<std::size_t> order_;
    mutable std::mutex mutex_;
};

} // namespace wsopt
