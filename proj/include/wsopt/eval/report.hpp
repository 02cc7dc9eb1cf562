#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wsopt/core/format.hpp"
#include "wsopt/eval/compare.hpp"
#include "wsopt/eval/metrics.hpp"
#include "wsopt/eval/protocol.hpp"

namespace wsopt {

struct PredictorReport {
    std::string predictor;
    AccuracyCurve curve;
};

struct ConditionReport {
    std::string condition;
    std::string workspace_hash;
    std::size_t samples = 0;
    std::vector<PredictorReport> predictors;
    std::optional<std::pair<double, double>> covariance; // mean det, mean trace
    std::optional<LearningCurve> learning;
};

struct EvalReport {
    std::string config_hash;
    std::uint64_t seed = 0;
    std::size_t folds = 4, repeats = 3;
    std::vector<ConditionReport> conditions;
};

namespace detail {

inline std::string header(const std::string& config_hash) { return "# config " + config_hash + "\n"; }

} // namespace detail

/// condition,predictor,fraction,mean,sd,n
inline std::string accuracy_csv(const EvalReport& r) {
    std::string out = detail::header(r.config_hash) + "condition,predictor,fraction,mean,sd,n\n";
    for (const auto& c : r.conditions)
        for (const auto& p : c.predictors)
            for (const auto& pt : p.curve.points)
                out += c.condition + "," + p.predictor + "," + fmt_double(pt.fraction) + "," +
                       fmt_double(pt.accuracy.mean) + "," + fmt_double(pt.accuracy.sd) + "," +
                       std::to_string(pt.accuracy.n) + "\n";
    return out;
}

/// condition,train_fraction,observed_fraction,mean,sd,n; observed_fraction
/// "mean" is the per-fold average over observation fractions.
inline std::string learning_csv(const EvalReport& r) {
    std::string out = detail::header(r.config_hash) + "condition,train_fraction,observed_fraction,mean,sd,n\n";
    for (const auto& c : r.conditions) {
        if (!c.learning) continue;
        for (const auto& row : c.learning->rows) {
            auto line = [&](const std::string& obs, const MeanSd& m) {
                out += c.condition + "," + fmt_double(row.train_fraction) + "," + obs + "," + fmt_double(m.mean) + "," +
                       fmt_double(m.sd) + "," + std::to_string(m.n) + "\n";
            };
            for (std::size_t i = 0; i < row.by_fraction.size(); ++i)
                line(fmt_double(c.learning->observation_fractions[i]), row.by_fraction[i]);
            line("mean", row.overall);
        }
    }
    return out;
}

/// Structured text: per condition and predictor, weighted metrics at every
/// observation fraction and the confusion matrix at the last one.
inline std::string summary_text(const EvalReport& r) {
    std::string out = detail::header(r.config_hash);
    out += "seed " + std::to_string(r.seed) + "\n";
    out += "cv " + std::to_string(r.folds) + "-fold x " + std::to_string(r.repeats) + " repeats\n";
    out += "accuracy counts posterior ties as wrong; f1, precision and recall take the first maximum\n";
    for (const auto& c : r.conditions) {
        out += "condition " + c.condition + "\n";
        out += "  workspace " + c.workspace_hash + "\n";
        out += "  samples " + std::to_string(c.samples) + "\n";
        if (c.covariance)
            out += "  covariance det " + fmt_double(c.covariance->first) + " trace " + fmt_double(c.covariance->second) +
                   "\n";
        for (const auto& p : c.predictors) {
            out += "  predictor " + p.predictor + "\n";
            for (const auto& pt : p.curve.points) {
                const SummaryMetrics m = summary_metrics(pt.predicted, pt.truth);
                out += "    fraction " + fmt_fixed(pt.fraction, 2) + " accuracy " + fmt_fixed(pt.accuracy.mean, 4) +
                       " sd " + fmt_fixed(pt.accuracy.sd, 4) + " n " + std::to_string(pt.accuracy.n) + " f1 " +
                       fmt_fixed(m.f1, 4) + " precision " + fmt_fixed(m.precision, 4) + " recall " +
                       fmt_fixed(m.recall, 4) + "\n";
            }
            if (p.curve.points.empty()) continue;
            const auto& last = p.curve.points.back();
            const SummaryMetrics m = summary_metrics(last.predicted, last.truth);
            out += "    confusion fraction " + fmt_fixed(last.fraction, 2) + " (rows predicted, columns true)\n";
            out += "      goal";
            for (GoalId g : m.confusion.classes) out += " " + std::to_string(g);
            out += "\n";
            for (std::size_t i = 0; i < m.confusion.classes.size(); ++i) {
                out += "      " + std::to_string(m.confusion.classes[i]);
                for (std::size_t v : m.confusion.counts[i]) out += " " + std::to_string(v);
                out += "\n";
            }
        }
    }
    return out;
}

/// size,optimizer,seed,best,evaluations
inline std::string compare_csv(const CompareReport& r, const std::string& config_hash) {
    std::string out = detail::header(config_hash) + "size,optimizer,seed,best,evaluations\n";
    for (const auto& run : r.runs)
        out += run.size.label() + "," + run.optimizer + "," + std::to_string(run.seed) + "," + fmt_double(run.best) +
               "," + std::to_string(run.evaluations) + "\n";
    return out;
}

/// Optimizers as rows, grid sizes as columns, cells "mean (sd)".
inline std::string compare_table(const CompareReport& r, const std::string& config_hash) {
    std::string out = detail::header(config_hash) + "runs per cell " + std::to_string(r.seeds.size()) + "\n";
    out += "optimizer";
    for (const auto& s : r.sizes) out += " | " + s.label();
    out += "\n";
    for (const char* name : kOptimizerNames) {
        out += name;
        for (const auto& s : r.sizes) {
            const auto& c = r.cell(name, s);
            char buf[96];
            std::snprintf(buf, sizeof buf, " | %.4e (%.2e)", c.stats.mean, c.stats.sd);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace wsopt
