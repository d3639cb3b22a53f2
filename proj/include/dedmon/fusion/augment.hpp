#pragma once

#include <cstdint>

#include "dedmon/fusion/table.hpp"

namespace dedmon::fusion {

/// Oversamples every class below `target_count_per_class` with SMOTE rows:
/// source row r (real, same class), one of its k nearest same-class real
/// neighbours n, and r + u (n - r) with u ~ U[0, 1]. Draw j of class c uses
/// the stream keyed by (seed, c, j). Throws Augmentation when a class that
/// needs rows has at most k real rows.
FeatureTable smote_augment(const FeatureTable& table, std::size_t k_neighbors, std::size_t target_count_per_class,
                           std::uint64_t seed);

/// Appends `copies` noisy copies of every real row: x + N(0, (fraction * sigma_j)^2)
/// with sigma_j the real-row std of column j. fraction must be positive.
FeatureTable gaussian_perturb(const FeatureTable& table, double noise_fraction, std::size_t copies,
                              std::uint64_t seed);

/// Raises every class to the largest class count with SMOTE rows.
FeatureTable balance_classes(const FeatureTable& table, std::size_t k_neighbors, std::uint64_t seed);

}  // namespace dedmon::fusion
