#pragma once

#include <span>
#include <vector>

#include "wsopt/legibility/goal_models.hpp"
#include "wsopt/prediction/maxent_irl.hpp"

namespace wsopt {

/// Goal posterior of a grid prefix under unit or learned state costs. The
/// goal set is every station; callers pass the stage-valid subset.
class BayesianPredictor {
public:
    /// Unit costs.
    explicit BayesianPredictor(const GridLayout& layout) : model_(layout, CostModel::uniform(layout)) {}

    /// Learned costs, clamped below by `floor`.
    BayesianPredictor(const GridLayout& layout, const LinearCostModel& learned, double floor = 1e-3)
        : model_(layout, learned.to_cost_model(floor)) {}

    GoalPosterior predict(std::span<const GridPos> prefix, std::span<const GoalId> goals) const {
        return model_.posterior(prefix, goals);
    }

    const GridGoalModel& model() const { return model_; }

private:
    GridGoalModel model_;
};

} // namespace wsopt
