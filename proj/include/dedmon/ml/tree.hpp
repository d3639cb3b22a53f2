#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dedmon/ml/model.hpp"

namespace dedmon::ml {

struct TreeConfig {
    int max_depth = 8;
    std::size_t min_samples_split = 2;
    std::size_t max_features = 0;  // candidate features per split; 0 = all
};

/// CART classification tree on Gini impurity over the given row sample
/// (duplicates allowed, as produced by bootstrapping). Leaves hold class
/// fractions. Features per split are drawn from the stream keyed by `seed`.
Tree fit_classification_tree(const Dataset& data, std::span<const std::size_t> rows, const TreeConfig& config,
                             std::uint64_t seed);

struct ForestConfig {
    std::size_t trees = 100;
    TreeConfig tree;  // max_features 0 means sqrt(d) here
    bool bootstrap = true;
    std::uint64_t seed = 0;
};

ForestParams fit_forest(const Dataset& data, const ForestConfig& config);
/// Fraction of trees voting for each class.
Proba forest_proba(const ForestParams& forest, std::span<const double> x);

struct BoostingConfig {
    std::size_t rounds = 100;
    double learning_rate = 0.1;
    int max_depth = 3;
    std::size_t min_samples_split = 2;
    double subsample = 0.8;
    /// Adds L2 on leaf values and per-tree column subsampling.
    bool regularized = false;
    double lambda = 1.0;
    double colsample = 0.8;
    std::uint64_t seed = 0;
};

/// Softmax gradient boosting with one regression tree per class per round.
BoostingParams fit_boosting(const Dataset& data, const BoostingConfig& config);
Proba boosting_proba(const BoostingParams& model, std::span<const double> x);

}  // namespace dedmon::ml
