#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dedmon/ml/model.hpp"

namespace dedmon::ml {

/// Candidate values per hyperparameter; unlisted ones keep their defaults.
using Grid = std::map<std::string, std::vector<double>>;

/// Cartesian product in lexicographic order of (name, value index).
std::vector<Hyperparameters> expand_grid(const Grid& grid);

/// Throws Config when the grid is empty or leaves the searchable ranges
/// (e.g. C in [0.01, 1], 30-200 trees, 2-4 hidden layers of 16-128 units).
void validate_grid(ModelKind kind, const Grid& grid);

struct GridPoint {
    Hyperparameters hyper;
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
    std::size_t size = 0;  // parameter_count
};

struct GridSearchResult {
    ModelSpec best;
    std::size_t best_index = 0;
    std::vector<GridPoint> points;
};

/// Stratified k-fold CV; the best mean accuracy wins, ties go to the smaller
/// model and then to the lexicographically smaller hyperparameters. Every
/// point sees the same folds and the same model seed.
GridSearchResult grid_search(ModelKind kind, const Grid& grid, const Dataset& train, std::uint64_t seed,
                             std::size_t folds = 3, std::size_t jobs = 1);

}  // namespace dedmon::ml
