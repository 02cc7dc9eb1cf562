#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <span>
#include <vector>

#include "wsopt/core/error.hpp"
#include "wsopt/env/task_graph.hpp"

namespace wsopt {

/// Sample mean, unbiased sd (0 for a single value) and count.
struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

inline MeanSd mean_sd(std::span<const double> v) {
    if (v.empty()) throw InvalidArgument("mean of an empty sample");
    MeanSd r;
    r.n = v.size();
    for (double x : v) r.mean += x;
    r.mean /= static_cast<double>(r.n);
    if (r.n > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - r.mean) * (x - r.mean);
        r.sd = std::sqrt(ss / static_cast<double>(r.n - 1));
    }
    return r;
}

/// counts[p][t]: predictions of classes[p] whose true class is classes[t].
struct ConfusionMatrix {
    std::vector<GoalId> classes;
    std::vector<std::vector<std::size_t>> counts;

    std::size_t column_sum(std::size_t t) const {
        std::size_t s = 0;
        for (const auto& row : counts) s += row[t];
        return s;
    }
    std::size_t row_sum(std::size_t p) const {
        std::size_t s = 0;
        for (std::size_t c : counts[p]) s += c;
        return s;
    }
};

struct SummaryMetrics {
    double precision = 0.0, recall = 0.0, f1 = 0.0, accuracy = 0.0;
    ConfusionMatrix confusion;
};

/// Per-class precision, recall and F1 averaged with true-class support
/// weights. A class never predicted has precision 0; F1 is 0 when both
/// precision and recall are.
inline SummaryMetrics summary_metrics(std::span<const GoalId> predicted, std::span<const GoalId> truth) {
    if (predicted.empty()) throw InvalidArgument("empty prediction set");
    if (predicted.size() != truth.size()) throw InvalidArgument("prediction and label counts differ");
    std::vector<GoalId> classes(truth.begin(), truth.end());
    classes.insert(classes.end(), predicted.begin(), predicted.end());
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::map<GoalId, std::size_t> idx;
    for (std::size_t i = 0; i < classes.size(); ++i) idx[classes[i]] = i;

    SummaryMetrics m;
    m.confusion.classes = classes;
    m.confusion.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++m.confusion.counts[idx[predicted[i]]][idx[truth[i]]];
        correct += predicted[i] == truth[i];
    }
    const double n = static_cast<double>(truth.size());
    m.accuracy = static_cast<double>(correct) / n;
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const double support = static_cast<double>(m.confusion.column_sum(c));
        if (support == 0.0) continue;
        const double tp = static_cast<double>(m.confusion.counts[c][c]);
        const double pred = static_cast<double>(m.confusion.row_sum(c));
        const double p = pred > 0.0 ? tp / pred : 0.0;
        const double r = tp / support;
        const double f = p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
        m.precision += support / n * p;
        m.recall += support / n * r;
        m.f1 += support / n * f;
    }
    return m;
}

} // namespace wsopt
