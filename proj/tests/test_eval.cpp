#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "fixtures.hpp"
#include "wsopt/eval/compare.hpp"
#include "wsopt/eval/predictors.hpp"
#include "wsopt/eval/report.hpp"
#include "wsopt/planning/visibility.hpp"
#include "wsopt/qd/tabletop_space.hpp"

using namespace wsopt;

namespace {

TaskGraph four_cube_task() { return two_column_task({0, 1}, {2, 3}); }

std::map<GoalId, std::size_t> class_counts(const std::vector<GoalId>& labels) {
    std::map<GoalId, std::size_t> out;
    for (GoalId g : labels) ++out[g];
    return out;
}

/// Predictor that reads the target off the final point of the full motion.
template <class Point>
TrainFn<Point> echo_trainer(const Dataset<Point>& all) {
    return [&all](const Dataset<Point>&) -> PredictFn<Point> {
        return [&all](std::span<const Point> prefix, double, std::span<const GoalId> goals) {
            for (const auto& t : all)
                if (std::equal(prefix.begin(), prefix.end(), t.points.begin()))
                    return GoalPosterior::one_hot(std::vector<GoalId>(goals.begin(), goals.end()), t.goal);
            throw InvalidArgument("unknown prefix");
        };
    };
}

Dataset<Vec2> tabletop_data(std::size_t n, double sigma, std::uint64_t seed) {
    ReachNoise noise;
    noise.sigma = sigma;
    return generate_dataset(fixtures::eight_cube_scene(), four_cube_task(), n, noise, seed);
}

} // namespace

TEST(Dataset, BalancedLabelsAndValidStages) {
    const auto d = tabletop_data(8, 0.02, 1);
    ASSERT_EQ(d.size(), 32u);
    for (auto [g, n] : class_counts(labels(d))) EXPECT_EQ(n, 8u) << g;
    for (const auto& t : d) {
        EXPECT_TRUE(std::binary_search(t.valid_goals.begin(), t.valid_goals.end(), t.goal));
        // Second-column cubes only become valid once the first column is done.
        if (t.goal >= 2) {
            EXPECT_GE(t.valid_goals.front(), 2);
        } else {
            EXPECT_LE(t.valid_goals.back(), 1);
        }
    }
}

TEST(Dataset, ZeroNoiseGivesOptimalPaths) {
    const auto scene = fixtures::eight_cube_scene();
    ReachNoise none;
    none.sigma = 0.0;
    for (const auto& t : generate_dataset(scene, four_cube_task(), 3, none, 5))
        EXPECT_EQ(t.points, continuous_shortest_path(scene, scene.hand_start, scene.find_cube(t.goal)->position).points);

    const GridLayout g = fixtures::kitchen7();
    GridAgentParams rational;
    rational.beta = INFINITY;
    const GridGoalModel model(g, CostModel::uniform(g));
    for (const auto& t : generate_dataset(g, overcooked_task(), 4, rational, 5)) {
        EXPECT_EQ(t.points, model.optimal(model.start_point(t.start), t.goal).points);
        EXPECT_TRUE(GridGoalModel::scored(t.goal));
    }
}

TEST(Dataset, SeedDeterminesEveryByte) {
    const GridLayout g = fixtures::kitchen7();
    EXPECT_EQ(generate_dataset(g, overcooked_task(), 5, {}, 9), generate_dataset(g, overcooked_task(), 5, {}, 9));
    EXPECT_NE(generate_dataset(g, overcooked_task(), 5, {}, 9), generate_dataset(g, overcooked_task(), 5, {}, 10));
    EXPECT_EQ(tabletop_data(4, 0.02, 3), tabletop_data(4, 0.02, 3));
}

TEST(StratifiedKFold, ExactStratificationOnBalancedData) {
    std::vector<GoalId> labels;
    for (GoalId g = 0; g < 4; ++g)
        for (int i = 0; i < 8; ++i) labels.push_back(g);
    const auto folds = stratified_kfold(labels, 4, 3, 17);
    ASSERT_EQ(folds.repeats(), 3u);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t f = 0; f < 4; ++f) {
            std::vector<GoalId> in;
            for (std::size_t i : folds.test_indices(r, f)) in.push_back(labels[i]);
            for (auto [g, n] : class_counts(in)) EXPECT_EQ(n, 2u);
            EXPECT_EQ(in.size(), 8u);
        }
    EXPECT_NE(folds.fold[0], folds.fold[1]);
    EXPECT_NE(folds.fold[1], folds.fold[2]);
    EXPECT_NE(folds.fold[0], folds.fold[2]);
}

TEST(StratifiedKFold, PartitionAndProportionProperty) {
    Rng rng = make_rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t k = 2 + uniform_index(rng, 4);
        std::vector<GoalId> labels;
        const std::size_t classes = 1 + uniform_index(rng, 5);
        for (GoalId c = 0; c < static_cast<GoalId>(classes); ++c)
            for (std::size_t i = 0, n = k + uniform_index(rng, 12); i < n; ++i) labels.push_back(c);
        for (std::size_t i = labels.size(); i > 1; --i) std::swap(labels[i - 1], labels[uniform_index(rng, i)]);
        const auto folds = stratified_kfold(labels, k, 2, static_cast<std::uint64_t>(trial));
        const auto total = class_counts(labels);
        for (std::size_t r = 0; r < 2; ++r) {
            std::size_t covered = 0;
            for (std::size_t f = 0; f < k; ++f) {
                const auto test = folds.test_indices(r, f);
                const auto train = folds.train_indices(r, f);
                EXPECT_EQ(test.size() + train.size(), labels.size());
                covered += test.size();
                std::vector<GoalId> in;
                for (std::size_t i : test) in.push_back(labels[i]);
                auto counts = class_counts(in);
                for (auto [c, n] : total) {
                    const double share = static_cast<double>(n) / static_cast<double>(k);
                    EXPECT_LE(std::fabs(static_cast<double>(counts[c]) - share), 1.0);
                }
            }
            EXPECT_EQ(covered, labels.size()); // folds are disjoint and cover the data
        }
    }
}

TEST(StratifiedKFold, RejectsSmallClasses) {
    const std::vector<GoalId> labels{0, 0, 0, 0, 1, 1, 1};
    EXPECT_THROW(stratified_kfold(labels, 4, 1, 0), InvalidArgument);
    EXPECT_NO_THROW(stratified_kfold(labels, 3, 1, 0));
}

TEST(StratifiedSubset, NestedAndNeverEmpty) {
    std::vector<GoalId> labels;
    for (GoalId g = 0; g < 3; ++g)
        for (int i = 0; i < 10; ++i) labels.push_back(g);
    std::vector<std::size_t> pool(labels.size());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    std::vector<std::size_t> prev;
    for (double f : {0.05, 0.3, 0.5, 1.0}) {
        const auto s = stratified_subset(pool, labels, f, 8);
        EXPECT_TRUE(std::includes(s.begin(), s.end(), prev.begin(), prev.end()));
        std::vector<GoalId> in;
        for (std::size_t i : s) in.push_back(labels[i]);
        EXPECT_EQ(class_counts(in).size(), 3u);
        prev = s;
    }
    EXPECT_EQ(prev.size(), labels.size());
    EXPECT_THROW(stratified_subset(pool, labels, 0.0, 8), InvalidArgument);
}

TEST(Accuracy, EchoPredictorIsAlwaysRight) {
    const auto d = tabletop_data(8, 0.02, 2);
    const auto folds = stratified_kfold(labels(d), 4, 3, 1);
    const std::vector<double> fr{0.1, 0.4, 1.0};
    const auto curve = accuracy_vs_fraction(d, folds, echo_trainer(d), fr);
    for (const auto& p : curve.points) {
        EXPECT_EQ(p.accuracy.mean, 1.0);
        EXPECT_EQ(p.accuracy.sd, 0.0);
        EXPECT_EQ(p.accuracy.n, 12u);
    }
}

TEST(Accuracy, SingleGoalDatasetIsAlwaysRight) {
    const auto scene = fixtures::eight_cube_scene();
    const auto d = generate_dataset(scene, two_column_task({5}, {}), 8, {}, 4);
    const auto folds = stratified_kfold(labels(d), 4, 1, 1);
    const std::vector<double> fr{0.1, 0.5, 1.0};
    for (const auto& p : accuracy_vs_fraction(d, folds, heuristic_trainer(scene), fr).points)
        EXPECT_EQ(p.accuracy.mean, 1.0);
}

TEST(Accuracy, BayesianIsExactOnFullOptimalWalks) {
    const GridLayout g = fixtures::kitchen7();
    GridAgentParams rational;
    rational.beta = INFINITY;
    const auto d = generate_dataset(g, overcooked_task(), 8, rational, 3);
    const auto folds = stratified_kfold(labels(d), 4, 3, 2);
    const std::vector<double> fr{0.2, 0.5, 1.0};
    const auto curve = accuracy_vs_fraction(d, folds, unit_bayes_trainer(g), fr);
    EXPECT_EQ(curve.at(1.0).accuracy.mean, 1.0);
    for (const auto& p : curve.points) {
        EXPECT_GE(p.accuracy.mean, 0.0);
        EXPECT_LE(p.accuracy.mean, 1.0);
        // Pooled over three repeats, each true class appears 3 * 8 times.
        const auto m = summary_metrics(p.predicted, p.truth);
        for (std::size_t c = 0; c < m.confusion.classes.size(); ++c)
            EXPECT_EQ(m.confusion.column_sum(c), GridGoalModel::scored(m.confusion.classes[c]) ? 24u : 0u);
    }
}

TEST(LearningCurve, FullTrainingReproducesAccuracyCurve) {
    const auto d = tabletop_data(8, 0.02, 6);
    const auto folds = stratified_kfold(labels(d), 4, 2, 3);
    const std::vector<double> fr{0.3, 0.6};
    const std::vector<double> tf{0.5, 1.0};
    const TsgTrainerParams tp{20, 1e-6};
    const auto curve = accuracy_vs_fraction(d, folds, tsg_trainer(tp), fr);
    const auto lc = learning_curve(d, folds, tsg_trainer(tp), tf, fr, 11);
    ASSERT_EQ(lc.rows.size(), 2u);
    for (std::size_t i = 0; i < fr.size(); ++i) {
        EXPECT_DOUBLE_EQ(lc.rows[1].by_fraction[i].mean, curve.points[i].accuracy.mean);
        EXPECT_DOUBLE_EQ(lc.rows[1].by_fraction[i].sd, curve.points[i].accuracy.sd);
    }
    const std::vector<double> zero{0.0};
    EXPECT_THROW(learning_curve(d, folds, tsg_trainer(tp), zero, fr, 11), InvalidArgument);
}

TEST(LearningCurve, MoreDataDoesNotHurtBeyondNoise) {
    // Repeated-seed estimate: per training fraction, every fold of every
    // dataset seed contributes one accuracy.
    const std::vector<double> fr{0.3, 0.5, 0.7};
    const std::vector<double> tf{0.25, 0.5, 0.75, 1.0};
    std::vector<std::vector<double>> acc(tf.size());
    for (std::uint64_t s = 0; s < 4; ++s) {
        const auto d = tabletop_data(16, 0.03, 100 + s);
        const auto folds = stratified_kfold(labels(d), 4, 2, s);
        const auto lc = learning_curve(d, folds, tsg_trainer({20, 1e-6}), tf, fr, s);
        for (std::size_t i = 0; i < tf.size(); ++i) acc[i].push_back(lc.rows[i].overall.mean);
    }
    for (std::size_t i = 1; i < tf.size(); ++i) {
        const MeanSd prev = mean_sd(acc[i - 1]), cur = mean_sd(acc[i]);
        EXPECT_GE(cur.mean, prev.mean - std::max(prev.sd, cur.sd)) << tf[i];
    }
}

TEST(SummaryMetrics, PerfectAndConstantPredictors) {
    const std::vector<GoalId> truth{0, 0, 1, 1, 2, 2, 3, 3};
    const auto perfect = summary_metrics(truth, truth);
    EXPECT_EQ(perfect.f1, 1.0);
    EXPECT_EQ(perfect.precision, 1.0);
    EXPECT_EQ(perfect.recall, 1.0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(perfect.confusion.counts[i][j], i == j ? 2u : 0u);
    const std::vector<GoalId> constant(8, 1);
    EXPECT_DOUBLE_EQ(summary_metrics(constant, truth).recall, 0.25);
    EXPECT_THROW(summary_metrics(std::vector<GoalId>{}, std::vector<GoalId>{}), InvalidArgument);
}

TEST(SummaryMetrics, MatchesReferenceImplementation) {
    // Expected values from scikit-learn precision_recall_fscore_support
    // (average="weighted", zero_division=0) and confusion_matrix transposed.
    const std::vector<GoalId> truth{0, 0, 0, 0, 1, 1, 2, 2, 2, 1, 1};
    const std::vector<GoalId> pred{0, 0, 1, 3, 1, 1, 2, 0, 2, 0, 1};
    const auto m = summary_metrics(pred, truth);
    EXPECT_NEAR(m.precision, 0.7272727272727273, 1e-12);
    EXPECT_NEAR(m.recall, 0.6363636363636364, 1e-12);
    EXPECT_NEAR(m.f1, 0.6727272727272727, 1e-12);
    const std::vector<std::vector<std::size_t>> expected{{2, 1, 1, 0}, {1, 3, 0, 0}, {0, 0, 2, 0}, {1, 0, 0, 0}};
    EXPECT_EQ(m.confusion.counts, expected);
    EXPECT_EQ(m.confusion.classes, (std::vector<GoalId>{0, 1, 2, 3}));
}

TEST(CovarianceStats, EpsilonIdentity) {
    std::map<GoalId, std::vector<std::vector<Vec2>>> data;
    const std::vector<Vec2> a{{0, 0}, {0.1, 0.05}, {0.2, 0.2}};
    data[0] = {a, a, a};
    data[1] = {a, a};
    const double eps = 1e-4;
    const auto [det, tr] = covariance_stats(TimeSeriesGaussian::fit(data, 6, eps));
    EXPECT_NEAR(det, eps * eps, 1e-20);
    EXPECT_NEAR(tr, 2 * eps, 1e-15);
}

TEST(CovarianceStats, DoublingNoiseRoughlyQuadruplesTrace) {
    const TsgTrainerParams tp{30, 1e-9};
    double tr1 = 0.0, tr2 = 0.0;
    for (std::uint64_t s = 0; s < 4; ++s) {
        tr1 += covariance_stats(fit_tsg(tabletop_data(16, 0.01, s), tp)).second;
        tr2 += covariance_stats(fit_tsg(tabletop_data(16, 0.02, s), tp)).second;
    }
    EXPECT_GT(tr2 / tr1, 3.0);
    EXPECT_LT(tr2 / tr1, 5.0);
}

TEST(CompareOptimizers, ShapeBudgetsAndDeterminism) {
    CompareParams p;
    p.init_iterations = 6;
    p.iterations = 10;
    p.de_population = 6;
    p.nslc.population = 6;
    const std::vector<GridSize> sizes{{5, 5}, {7, 5}};
    const std::vector<std::uint64_t> seeds{1, 2};
    const auto a = compare_optimizers(sizes, seeds, overcooked_task(), p);
    ASSERT_EQ(a.runs.size(), 12u);
    ASSERT_EQ(a.cells.size(), 6u);
    for (const auto& c : a.cells) EXPECT_EQ(c.best.size(), 2u);
    for (std::size_t i = 0; i < a.runs.size(); i += 3) {
        EXPECT_EQ(a.runs[i].optimizer, "map-elites");
        EXPECT_EQ(a.runs[i + 1].evaluations, a.runs[i].evaluations);
        EXPECT_EQ(a.runs[i + 2].evaluations, a.runs[i].evaluations);
    }
    const auto b = compare_optimizers(sizes, seeds, overcooked_task(), p);
    EXPECT_EQ(compare_csv(a, "h"), compare_csv(b, "h"));
    const std::string table = compare_table(a, "abc");
    EXPECT_EQ(table.rfind("# config abc\n", 0), 0u);
    EXPECT_NE(table.find("optimizer | 5x5 | 7x5"), std::string::npos);
    EXPECT_NE(table.find("\nde |"), std::string::npos);
}

TEST(Report, CsvRowsCarryCountsAndHash) {
    const auto d = tabletop_data(4, 0.02, 2);
    const auto folds = stratified_kfold(labels(d), 4, 1, 1);
    const std::vector<double> fr{0.5, 1.0};
    EvalReport r;
    r.config_hash = "00ff";
    r.repeats = 1;
    ConditionReport c;
    c.condition = "baseline";
    c.samples = d.size();
    c.predictors.push_back({"heuristic", accuracy_vs_fraction(d, folds, heuristic_trainer(fixtures::eight_cube_scene()), fr)});
    r.conditions.push_back(c);
    const std::string csv = accuracy_csv(r);
    EXPECT_EQ(csv.rfind("# config 00ff\ncondition,predictor,fraction,mean,sd,n\n", 0), 0u);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    EXPECT_NE(csv.find("baseline,heuristic,1,"), std::string::npos);
    const std::string text = summary_text(r);
    EXPECT_NE(text.find("rows predicted, columns true"), std::string::npos);
}
