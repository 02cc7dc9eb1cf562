#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/env/grid_layout.hpp"

namespace wsopt {

using GoalId = int;
using SubtaskMask = std::uint64_t;

/// Location reference meaning "the domain's default start" (hand rest
/// position on the table; the pot in the kitchen when nothing else applies).
inline constexpr int kDefaultStart = -1;

struct Subtask {
    int id = 0;
    std::string name;
    std::vector<GoalId> goals;            // any one of these completes the subtask
    int finish_location = kDefaultStart;  // where the agent stands afterwards
    friend bool operator==(const Subtask&, const Subtask&) = default;
};

/// Subtasks, their goal sets, and precedence edges (a before b). Immutable
/// after construction; the edge relation is checked to be acyclic.
class TaskGraph {
public:
    static constexpr std::size_t kMaxSubtasks = 63;

    TaskGraph() = default;

    TaskGraph(std::vector<Subtask> subtasks, std::vector<std::pair<int, int>> edges,
              int initial_location = kDefaultStart, std::map<GoalId, std::string> goal_names = {})
        : subtasks_(std::move(subtasks)), edges_(std::move(edges)), initial_location_(initial_location),
          goal_names_(std::move(goal_names)) {
        if (subtasks_.empty()) throw InvalidArgument("task graph needs at least one subtask");
        if (subtasks_.size() > kMaxSubtasks) throw InvalidArgument("task graph supports at most 63 subtasks");
        for (std::size_t i = 0; i < subtasks_.size(); ++i) {
            if (subtasks_[i].goals.empty())
                throw InvalidArgument("subtask " + std::to_string(subtasks_[i].id) + " has an empty goal set");
            if (!index_.emplace(subtasks_[i].id, i).second)
                throw InvalidArgument("duplicate subtask id " + std::to_string(subtasks_[i].id));
        }
        preds_.assign(subtasks_.size(), 0);
        for (auto [a, b] : edges_) {
            const auto ia = index_of(a);
            const auto ib = index_of(b);
            if (!ia || !ib) throw InvalidArgument("edge references unknown subtask");
            if (*ia == *ib) throw CycleError("self-loop on subtask " + std::to_string(a));
            preds_[*ib] |= SubtaskMask{1} << *ia;
        }
        check_acyclic();
    }

    std::size_t size() const { return subtasks_.size(); }
    const Subtask& subtask(std::size_t index) const { return subtasks_.at(index); }
    const std::vector<Subtask>& subtasks() const { return subtasks_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    int initial_location() const { return initial_location_; }
    const std::map<GoalId, std::string>& goal_names() const { return goal_names_; }

    std::optional<std::size_t> index_of(int id) const {
        auto it = index_.find(id);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    SubtaskMask full_mask() const {
        return size() == 64 ? ~SubtaskMask{0} : (SubtaskMask{1} << size()) - 1;
    }
    SubtaskMask predecessors(std::size_t index) const { return preds_.at(index); }

    /// Subtasks not yet done whose predecessors are all done.
    SubtaskMask available(SubtaskMask done) const {
        SubtaskMask out = 0;
        for (std::size_t i = 0; i < size(); ++i) {
            const SubtaskMask bit = SubtaskMask{1} << i;
            if (!(done & bit) && (preds_[i] & ~done) == 0) out |= bit;
        }
        return out;
    }

    bool is_downset(SubtaskMask done) const {
        for (std::size_t i = 0; i < size(); ++i)
            if ((done >> i & 1) && (preds_[i] & ~done) != 0) return false;
        return true;
    }

    SubtaskMask mask_of(const std::set<int>& completed) const {
        SubtaskMask m = 0;
        for (int id : completed) {
            auto i = index_of(id);
            if (!i) throw InvalidArgument("unknown subtask id " + std::to_string(id));
            m |= SubtaskMask{1} << *i;
        }
        return m;
    }

    /// Sorted union of goal sets over the available subtasks.
    std::vector<GoalId> valid_goals(SubtaskMask done) const {
        std::vector<GoalId> goals;
        const SubtaskMask avail = available(done);
        for (std::size_t i = 0; i < size(); ++i)
            if (avail >> i & 1) goals.insert(goals.end(), subtasks_[i].goals.begin(), subtasks_[i].goals.end());
        std::sort(goals.begin(), goals.end());
        goals.erase(std::unique(goals.begin(), goals.end()), goals.end());
        return goals;
    }

    std::set<GoalId> valid_goals(const std::set<int>& completed) const {
        const auto v = valid_goals(mask_of(completed));
        return {v.begin(), v.end()};
    }

    /// Every goal id referenced by some subtask, sorted.
    std::vector<GoalId> all_goals() const {
        std::vector<GoalId> goals;
        for (const Subtask& s : subtasks_) goals.insert(goals.end(), s.goals.begin(), s.goals.end());
        std::sort(goals.begin(), goals.end());
        goals.erase(std::unique(goals.begin(), goals.end()), goals.end());
        return goals;
    }

    /// Location of the agent once `last` (an index) has been completed.
    int location_after(std::size_t last) const {
        const int loc = subtasks_.at(last).finish_location;
        return loc == kDefaultStart ? initial_location_ : loc;
    }

    std::string goal_name(GoalId g) const {
        auto it = goal_names_.find(g);
        return it == goal_names_.end() ? std::to_string(g) : it->second;
    }

    friend bool operator==(const TaskGraph& a, const TaskGraph& b) {
        return a.subtasks_ == b.subtasks_ && a.edges_ == b.edges_ && a.initial_location_ == b.initial_location_ &&
               a.goal_names_ == b.goal_names_;
    }

private:
    void check_acyclic() const {
        std::vector<int> indeg(size(), 0);
        for (std::size_t i = 0; i < size(); ++i) indeg[i] = std::popcount(preds_[i]);
        std::vector<std::size_t> ready;
        for (std::size_t i = 0; i < size(); ++i)
            if (indeg[i] == 0) ready.push_back(i);
        std::size_t seen = 0;
        while (!ready.empty()) {
            const std::size_t u = ready.back();
            ready.pop_back();
            ++seen;
            for (std::size_t v = 0; v < size(); ++v)
                if ((preds_[v] >> u & 1) && --indeg[v] == 0) ready.push_back(v);
        }
        if (seen != size()) throw CycleError("precedence edges contain a cycle");
    }

    std::vector<Subtask> subtasks_;
    std::vector<std::pair<int, int>> edges_;
    int initial_location_ = kDefaultStart;
    std::map<GoalId, std::string> goal_names_;
    std::vector<SubtaskMask> preds_;
    std::unordered_map<int, std::size_t> index_;
};

/// All downsets (valid completed sets) reachable from the empty set, ordered
/// by size then mask value.
inline std::vector<SubtaskMask> downsets(const TaskGraph& task) {
    std::vector<SubtaskMask> out{0};
    std::unordered_map<SubtaskMask, bool> seen{{0, true}};
    for (std::size_t head = 0; head < out.size(); ++head) {
        const SubtaskMask done = out[head];
        SubtaskMask avail = task.available(done);
        while (avail) {
            const SubtaskMask bit = avail & (~avail + 1);
            avail ^= bit;
            if (seen.emplace(done | bit, true).second) out.push_back(done | bit);
        }
    }
    std::sort(out.begin(), out.end(), [](SubtaskMask a, SubtaskMask b) {
        const int pa = std::popcount(a), pb = std::popcount(b);
        return pa != pb ? pa < pb : a < b;
    });
    return out;
}

/// Number of valid orderings (linear extensions), computed over downsets
/// without enumerating sequences. Throws on 64-bit overflow.
inline std::uint64_t count_sequences(const TaskGraph& task) {
    const auto sets = downsets(task);
    std::unordered_map<SubtaskMask, std::uint64_t> completions;
    for (auto it = sets.rbegin(); it != sets.rend(); ++it) {
        const SubtaskMask done = *it;
        if (done == task.full_mask()) {
            completions[done] = 1;
            continue;
        }
        std::uint64_t total = 0;
        SubtaskMask avail = task.available(done);
        while (avail) {
            const SubtaskMask bit = avail & (~avail + 1);
            avail ^= bit;
            if (__builtin_add_overflow(total, completions.at(done | bit), &total))
                throw InvalidArgument("sequence count overflows 64 bits");
        }
        completions[done] = total;
    }
    return completions.at(0);
}

/// Calls `visit` with every valid ordering of subtask indices. Returns the
/// number of orderings visited.
inline std::uint64_t for_each_sequence(const TaskGraph& task,
                                       const std::function<void(std::span<const std::size_t>)>& visit) {
    std::vector<std::size_t> order;
    order.reserve(task.size());
    std::uint64_t count = 0;
    std::function<void(SubtaskMask)> rec = [&](SubtaskMask done) {
        if (done == task.full_mask()) {
            ++count;
            visit(order);
            return;
        }
        SubtaskMask avail = task.available(done);
        for (std::size_t i = 0; i < task.size(); ++i) {
            if (!(avail >> i & 1)) continue;
            order.push_back(i);
            rec(done | SubtaskMask{1} << i);
            order.pop_back();
        }
    };
    rec(0);
    return count;
}

/// Kitchen task: three soups (2 tomato + 1 onion, 2 onion + 1 cabbage,
/// 3 fish). Ingredients of a soup precede its dish pickup, which precedes
/// serving. Goal ids are station kinds.
inline TaskGraph overcooked_task() {
    const int pot = static_cast<int>(StationKind::pot);
    const int serving = static_cast<int>(StationKind::serving);
    const std::vector<std::vector<StationKind>> recipes = {
        {StationKind::tomato, StationKind::tomato, StationKind::onion},
        {StationKind::onion, StationKind::onion, StationKind::cabbage},
        {StationKind::fish, StationKind::fish, StationKind::fish}};
    std::vector<Subtask> subtasks;
    std::vector<std::pair<int, int>> edges;
    int id = 0;
    for (std::size_t s = 0; s < recipes.size(); ++s) {
        std::vector<int> ingredients;
        for (std::size_t i = 0; i < recipes[s].size(); ++i) {
            const StationKind k = recipes[s][i];
            subtasks.push_back({id, "soup" + std::to_string(s) + "-" + std::string(station_name(k)) + "-" +
                                        std::to_string(i),
                                {static_cast<int>(k)}, pot});
            ingredients.push_back(id++);
        }
        const int dish = id++;
        subtasks.push_back({dish, "soup" + std::to_string(s) + "-dish", {static_cast<int>(StationKind::dish)}, pot});
        const int serve = id++;
        subtasks.push_back({serve, "soup" + std::to_string(s) + "-serve", {serving}, serving});
        for (int ing : ingredients) edges.emplace_back(ing, dish);
        edges.emplace_back(dish, serve);
    }
    std::map<GoalId, std::string> names;
    for (StationKind k : kAllStations) names[static_cast<int>(k)] = std::string(station_name(k));
    return TaskGraph(std::move(subtasks), std::move(edges), pot, std::move(names));
}

/// Two-column stacking task: every cube of the first column precedes every
/// cube of the second; order inside a column is free. Goal ids are cube ids.
inline TaskGraph two_column_task(const std::vector<int>& first_column, const std::vector<int>& second_column,
                                 std::map<GoalId, std::string> names = {}) {
    std::vector<Subtask> subtasks;
    std::vector<std::pair<int, int>> edges;
    for (int c : first_column) subtasks.push_back({c, "place-" + std::to_string(c), {c}, kDefaultStart});
    for (int c : second_column) subtasks.push_back({c, "place-" + std::to_string(c), {c}, kDefaultStart});
    for (int a : first_column)
        for (int b : second_column) edges.emplace_back(a, b);
    return TaskGraph(std::move(subtasks), std::move(edges), kDefaultStart, std::move(names));
}

} // namespace wsopt
