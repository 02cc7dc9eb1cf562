#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/core/parallel.hpp"
#include "wsopt/core/random.hpp"
#include "wsopt/env/trajectory.hpp"
#include "wsopt/eval/cross_validation.hpp"
#include "wsopt/eval/dataset.hpp"
#include "wsopt/eval/metrics.hpp"
#include "wsopt/legibility/posterior.hpp"

namespace wsopt {

/// Posterior over `goals` from a prefix covering `fraction` of the motion.
template <class Point>
using PredictFn = std::function<GoalPosterior(std::span<const Point>, double, std::span<const GoalId>)>;

/// Fits a predictor on a training set.
template <class Point>
using TrainFn = std::function<PredictFn<Point>(const Dataset<Point>&)>;

struct FractionResult {
    double fraction = 0.0;
    MeanSd accuracy;               // over folds x repeats
    std::vector<double> per_fold;  // repeat-major
    std::vector<GoalId> predicted; // argmax, ties to the lowest id; pooled over folds
    std::vector<GoalId> truth;
};

struct AccuracyCurve {
    std::vector<FractionResult> points;

    const FractionResult& at(double fraction) const {
        for (const auto& p : points)
            if (p.fraction == fraction) return p;
        throw InvalidArgument("fraction not in curve");
    }
};

namespace detail {

struct FoldOutcome {
    std::vector<std::size_t> correct;
    std::vector<std::vector<GoalId>> predicted, truth;
    std::size_t total = 0;
};

template <class Point>
Dataset<Point> select(const Dataset<Point>& data, std::span<const std::size_t> idx) {
    Dataset<Point> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(data[i]);
    return out;
}

/// A prediction counts as correct iff its unique argmax is the target.
template <class Point>
FoldOutcome score_fold(const Dataset<Point>& data, std::span<const std::size_t> test, const PredictFn<Point>& predict,
                       std::span<const double> fractions) {
    FoldOutcome o;
    o.correct.assign(fractions.size(), 0);
    o.predicted.resize(fractions.size());
    o.truth.resize(fractions.size());
    o.total = test.size();
    for (std::size_t i : test) {
        const auto& t = data[i];
        const std::size_t steps = t.points.empty() ? 0 : t.points.size() - 1;
        for (std::size_t f = 0; f < fractions.size(); ++f) {
            const auto prefix = take_prefix(t.points, prefix_steps(steps, fractions[f]));
            const GoalPosterior post = predict(prefix, fractions[f], t.valid_goals);
            const auto best = post.unique_argmax();
            o.correct[f] += best && *best == t.goal;
            o.predicted[f].push_back(post.argmax());
            o.truth[f].push_back(t.goal);
        }
    }
    return o;
}

inline void check_fractions(std::span<const double> fractions) {
    if (fractions.empty()) throw InvalidArgument("no observation fractions");
    for (double f : fractions)
        if (!(f > 0.0 && f <= 1.0)) throw InvalidArgument("observation fractions must lie in (0, 1]");
}

} // namespace detail

/// Cross-validated accuracy at each observation fraction. Folds run
/// concurrently; results are reduced in (repeat, fold) order.
template <class Point>
AccuracyCurve accuracy_vs_fraction(const Dataset<Point>& data, const FoldAssignment& folds, const TrainFn<Point>& train,
                                   std::span<const double> fractions, unsigned jobs = 1) {
    detail::check_fractions(fractions);
    const std::size_t runs = folds.repeats() * folds.k;
    const auto outcomes = parallel_map<detail::FoldOutcome>(runs, jobs, [&](std::size_t run) {
        const std::size_t r = run / folds.k, f = run % folds.k;
        const auto predict = train(detail::select(data, folds.train_indices(r, f)));
        return detail::score_fold(data, folds.test_indices(r, f), predict, fractions);
    });
    AccuracyCurve curve;
    for (std::size_t f = 0; f < fractions.size(); ++f) {
        FractionResult p;
        p.fraction = fractions[f];
        for (const auto& o : outcomes) {
            if (o.total == 0) continue;
            p.per_fold.push_back(static_cast<double>(o.correct[f]) / static_cast<double>(o.total));
            p.predicted.insert(p.predicted.end(), o.predicted[f].begin(), o.predicted[f].end());
            p.truth.insert(p.truth.end(), o.truth[f].begin(), o.truth[f].end());
        }
        p.accuracy = mean_sd(p.per_fold);
        curve.points.push_back(std::move(p));
    }
    return curve;
}

struct LearningCurveRow {
    double train_fraction = 0.0;
    std::vector<MeanSd> by_fraction; // one per observation fraction
    MeanSd overall;                  // per-fold accuracy averaged over observation fractions
};

struct LearningCurve {
    std::vector<double> observation_fractions;
    std::vector<LearningCurveRow> rows;

    /// Smallest training fraction whose overall mean reaches `threshold`.
    std::optional<double> first_reaching(double threshold) const {
        for (const auto& r : rows)
            if (r.overall.mean >= threshold) return r.train_fraction;
        return std::nullopt;
    }
};

/// For each training fraction, every cross-validation run retrains on a
/// nested stratified subsample of its training folds and is scored on its
/// full test fold. A training fraction of 1 reproduces accuracy_vs_fraction.
template <class Point>
LearningCurve learning_curve(const Dataset<Point>& data, const FoldAssignment& folds, const TrainFn<Point>& train,
                             std::span<const double> train_fractions, std::span<const double> fractions,
                             std::uint64_t seed, unsigned jobs = 1) {
    detail::check_fractions(fractions);
    if (train_fractions.empty()) throw InvalidArgument("no training fractions");
    const auto lab = labels(data);
    const std::size_t runs = folds.repeats() * folds.k;
    LearningCurve out;
    out.observation_fractions.assign(fractions.begin(), fractions.end());
    for (double tf : train_fractions) {
        const auto outcomes = parallel_map<detail::FoldOutcome>(runs, jobs, [&](std::size_t run) {
            const std::size_t r = run / folds.k, f = run % folds.k;
            const auto pool = folds.train_indices(r, f);
            const auto subset = stratified_subset(pool, lab, tf, derive_seed(seed, r, f));
            const auto predict = train(detail::select(data, subset));
            return detail::score_fold(data, folds.test_indices(r, f), predict, fractions);
        });
        LearningCurveRow row;
        row.train_fraction = tf;
        std::vector<double> overall;
        for (std::size_t f = 0; f < fractions.size(); ++f) {
            std::vector<double> acc;
            for (const auto& o : outcomes)
                if (o.total) acc.push_back(static_cast<double>(o.correct[f]) / static_cast<double>(o.total));
            row.by_fraction.push_back(mean_sd(acc));
        }
        for (const auto& o : outcomes) {
            if (!o.total) continue;
            double s = 0.0;
            for (std::size_t c : o.correct) s += static_cast<double>(c) / static_cast<double>(o.total);
            overall.push_back(s / static_cast<double>(fractions.size()));
        }
        row.overall = mean_sd(overall);
        out.rows.push_back(std::move(row));
    }
    return out;
}

} // namespace wsopt
