#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dedmon/core/error.hpp"
#include "dedmon/core/stats.hpp"
#include "dedmon/io/report.hpp"
#include "dedmon/io/stamp.hpp"
#include "dedmon/ml/ablation.hpp"
#include "dedmon/ml/split.hpp"
#include "test_support.hpp"

using namespace dedmon;
using namespace dedmon::ml;
using dedmon::testing::random_table;

namespace {

AblationConfig small_ablation() {
    AblationConfig c;
    c.mlp_seeds = 2;
    c.grids = {
        {ModelKind::LogisticRegression, {{"c", {0.1, 1.0}}}},
        {ModelKind::Mlp, {{"hidden_units", {16}}, {"patience", {10}}}},
        {ModelKind::RandomForest, {{"n_estimators", {30}}, {"max_depth", {3}}}},
        {ModelKind::GradientBoosting, {{"n_estimators", {30}}, {"max_depth", {3}}}},
    };
    return c;
}

std::string dump_reports(const AblationResult& r) {
    std::string out;
    for (const auto& cell : r.cells) out += io::dump(io::to_json(cell.report));
    return out;
}

}  // namespace

TEST(Split, StratifiedSizesAndDisjointness) {
    const auto t = random_table(1, 20, 3, 2);
    const auto s = stratified_split(t, 0.85, 9);
    EXPECT_EQ(s.train.size(), 51u);
    EXPECT_EQ(s.test.size(), 9u);
    EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    for (std::size_t i : s.test) EXPECT_TRUE(all.insert(i).second);
    EXPECT_EQ(all.size(), 60u);
    std::array<int, 3> per{};
    for (std::size_t i : s.test) ++per[static_cast<std::size_t>(fusion::code(t.meta(i).label))];
    EXPECT_EQ(per, (std::array<int, 3>{3, 3, 3}));
    const auto again = stratified_split(t, 0.85, 9);
    EXPECT_EQ(again.test, s.test);
    EXPECT_NE(stratified_split(t, 0.85, 10).test, s.test);
}

TEST(Split, UnevenClassesUseLargestRemainder) {
    const std::vector<int> labels{0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 2};
    const auto s = stratified_split(labels, 0.5, 1);
    EXPECT_EQ(s.train.size(), 6u);
    std::array<int, 3> per{};
    for (std::size_t i : s.test) ++per[static_cast<std::size_t>(labels[i])];
    for (int c : per) EXPECT_GE(c, 1);
    EXPECT_THROW(stratified_split(std::vector<int>{0, 0, 1}, 0.5, 1), Error);
}

TEST(Split, RejectsSyntheticRows) {
    auto t = random_table(1, 5, 3, 2);
    t.meta(2).provenance = fusion::Provenance::SyntheticSmote;
    try {
        stratified_split(t, 0.8, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Split);
    }
}

TEST(Folds, PartitionRowsAndKeepClasses) {
    std::vector<int> labels;
    for (int i = 0; i < 31; ++i) labels.push_back(i % 3);
    const auto folds = stratified_folds(labels, 3, 4);
    ASSERT_EQ(folds.size(), 3u);
    std::vector<int> seen(labels.size(), 0);
    for (const auto& f : folds) {
        std::set<int> classes;
        for (std::size_t i : f) {
            ++seen[i];
            classes.insert(labels[i]);
        }
        EXPECT_EQ(classes.size(), 3u);
        EXPECT_EQ(complement(labels.size(), f).size(), labels.size() - f.size());
    }
    for (int s : seen) EXPECT_EQ(s, 1);
    EXPECT_THROW(stratified_folds(std::vector<int>{0, 0, 0, 1, 1, 2}, 3, 1), Error);
}

TEST(GridSearch, ExpansionOrderAndRanges) {
    const Grid g{{"b", {1, 2}}, {"a", {10, 20, 30}}};
    const auto pts = expand_grid(g);
    ASSERT_EQ(pts.size(), 6u);
    EXPECT_EQ(pts[0], (Hyperparameters{{"a", 10}, {"b", 1}}));
    EXPECT_EQ(pts[1], (Hyperparameters{{"a", 10}, {"b", 2}}));
    EXPECT_EQ(pts[5], (Hyperparameters{{"a", 30}, {"b", 2}}));
    EXPECT_THROW(validate_grid(ModelKind::LogisticRegression, {{"c", {5.0}}}), Error);
    EXPECT_THROW(validate_grid(ModelKind::RandomForest, {{"n_estimators", {10}}}), Error);
    EXPECT_THROW(validate_grid(ModelKind::Mlp, {{"hidden_layers", {1}}}), Error);
    EXPECT_THROW(validate_grid(ModelKind::Mlp, {}), Error);
    EXPECT_NO_THROW(validate_grid(ModelKind::GradientBoosting, {{"regularized", {1}}, {"subsample", {0.5}}}));
    for (const auto& [kind, grid] : default_grids()) EXPECT_NO_THROW(validate_grid(kind, grid));
}

TEST(GridSearch, TiesGoToSmallerModelThenSmallerValues) {
    const auto t = random_table(3, 15, 3, 0, 8.0);
    const auto data = to_dataset(t);
    const auto lr = grid_search(ModelKind::LogisticRegression, {{"c", {1.0, 0.5, 0.1}}}, data, 1);
    for (const auto& p : lr.points) ASSERT_DOUBLE_EQ(p.mean_accuracy, 1.0);
    EXPECT_DOUBLE_EQ(lr.best.get("c"), 0.1);
    const auto rf = grid_search(ModelKind::RandomForest, {{"n_estimators", {60, 30}}, {"max_depth", {5, 3}}}, data, 1);
    for (const auto& p : rf.points) ASSERT_DOUBLE_EQ(p.mean_accuracy, 1.0);
    EXPECT_EQ(rf.best.get_int("n_estimators"), 30);
    EXPECT_EQ(rf.best.get_int("max_depth"), 3);
    const auto lr4 = grid_search(ModelKind::LogisticRegression, {{"c", {1.0, 0.1}}}, data, 1, 3, 4);
    EXPECT_EQ(lr4.points[0].fold_accuracy, lr.points[0].fold_accuracy);
}

TEST(Prepare, SelectionScalingAndAugmentationAreTrainOnly) {
    const auto t = random_table(5, 20, 30, 10, 1.5);
    const auto split = stratified_split(t, 0.85, 2);
    const auto train = t.select_rows(split.train);
    const auto test = t.select_rows(split.test);
    PreprocessConfig cfg;
    const auto p = prepare_features(train, test, FeatureSet::Multimodal, cfg, 7);
    EXPECT_EQ(p.selected.size(), 28u);
    EXPECT_EQ(p.test.rows(), test.rows());
    EXPECT_EQ(p.test.real_rows(), test.rows());
    EXPECT_EQ(p.scaler.fitted_on, train.rows());
    const auto idx = *train.column_index(p.scaler.names[0]);
    EXPECT_DOUBLE_EQ(p.scaler.means[0], stats::mean(train.column(idx)));
    // 2x the largest class via SMOTE, then one noise copy of each real row.
    EXPECT_EQ(p.train.rows(), 3u * 34 + train.rows());
    EXPECT_EQ(p.train.real_rows(), train.rows());

    const auto ae = prepare_features(train, test, FeatureSet::AeOnly, cfg, 7);
    for (const auto& c : ae.selected) EXPECT_EQ(fusion::modality_of(c), fusion::Modality::Ae);
    const auto cam = prepare_features(train, test, FeatureSet::CameraOnly, cfg, 7);
    EXPECT_EQ(cam.selected.size(), 8u);
    for (const auto& c : cam.selected) EXPECT_EQ(fusion::modality_of(c), fusion::Modality::Vision);
}

TEST(Ablation, NoSyntheticRowReachesATestSplit) {
    const auto t = random_table(6, 20, 30, 10, 1.5);
    const auto cfg = small_ablation();
    const auto prepared = prepare_ablation(t, cfg, 42);
    ASSERT_EQ(prepared.prepared.size(), 3u);
    for (const auto& [set, data] : prepared.prepared) {
        for (std::size_t i = 0; i < data.test.rows(); ++i) {
            ASSERT_EQ(data.test.meta(i).provenance, fusion::Provenance::Real) << to_string(set);
        }
        EXPECT_GT(data.train.rows(), data.train.real_rows());
        EXPECT_EQ(data.test.rows(), prepared.split.test.size());
    }
}

TEST(Ablation, ParallelCellsMatchSerialRun) {
    const auto t = random_table(7, 20, 30, 10, 1.2);
    auto cfg = small_ablation();
    const auto serial = evaluate_ablation(t, cfg, 42);
    cfg.jobs = 4;
    const auto parallel = evaluate_ablation(t, cfg, 42);
    ASSERT_EQ(serial.cells.size(), 12u);
    EXPECT_EQ(dump_reports(serial), dump_reports(parallel));
    for (std::size_t i = 0; i < serial.cells.size(); ++i) {
        const auto& cell = serial.cells[i];
        EXPECT_EQ(cell.models.size(), cell.kind == ModelKind::Mlp ? 2u : 1u);
        EXPECT_TRUE(cell.models[0].params == parallel.cells[i].models[0].params);
        EXPECT_EQ(cell.report.test_rows, serial.split.test.size());
        EXPECT_EQ(cell.report.run_stats.has_value(), cell.kind == ModelKind::Mlp);
    }
}

TEST(Ablation, OriginalOrderStillRuns) {
    const auto t = random_table(8, 20, 30, 10, 1.2);
    auto cfg = small_ablation();
    cfg.paper_order = true;
    cfg.grids.erase(ModelKind::Mlp);
    const auto r = evaluate_ablation(t, cfg, 1);
    EXPECT_EQ(r.cells.size(), 9u);
    EXPECT_GT(r.split.test.size(), 9u);
}
