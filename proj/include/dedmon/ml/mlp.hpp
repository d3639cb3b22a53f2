#pragma once

#include <cstdint>
#include <vector>

#include "dedmon/ml/model.hpp"

namespace dedmon::ml {

struct MlpConfig {
    std::vector<std::size_t> hidden;  // units per hidden layer
    double l2 = 0.001;
    double dropout = 0.2;
    double learning_rate = 1e-3;
    std::size_t batch_size = 16;
    std::size_t max_epochs = 500;
    std::size_t patience = 20;
    double validation_fraction = 0.2;
    std::uint64_t seed = 0;
};

struct MlpFit {
    MlpParams params;
    std::size_t epochs_run = 0;
    std::size_t best_epoch = 0;
    double best_validation_loss = 0.0;
    bool stopped_early = false;
};

/// He-initialised network for the given input width.
MlpParams init_mlp(std::size_t inputs, const std::vector<std::size_t>& hidden, std::uint64_t seed);

/// Mini-batch gradient descent with a fixed rate and inverted dropout,
/// early-stopped on a stratified validation carve-out with the best weights
/// restored. Throws TrainingDiverged on a non-finite loss.
MlpFit fit_mlp(const Dataset& data, const MlpConfig& config);

/// Mean cross-entropy over the rows plus l2 * sum of squared weights, with
/// dropout disabled. Fills `gradient` (layer by layer, weights then bias)
/// when non-null.
double mlp_loss(const MlpParams& params, const Dataset& data, double l2, std::vector<double>* gradient);

/// Flattened parameters in the same order as the gradient.
std::vector<double> flatten(const MlpParams& params);
void unflatten(std::span<const double> values, MlpParams& params);

Proba mlp_proba(const MlpParams& params, std::span<const double> x);

}  // namespace dedmon::ml
