#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dedmon/fusion/table.hpp"

namespace dedmon::ml {

struct SplitIndices {
    std::vector<std::size_t> train;  // ascending row indices
    std::vector<std::size_t> test;
};

/// Per-class shuffle then cut. The train total is round(N * fraction);
/// classes receive floor(n_c * fraction) rows plus largest-remainder extras,
/// and always keep at least one row on each side. Throws Split when the
/// table holds synthetic rows or a present class has a single row.
SplitIndices stratified_split(const fusion::FeatureTable& table, double train_fraction, std::uint64_t seed);
SplitIndices stratified_split(std::span<const int> labels, double train_fraction, std::uint64_t seed);

/// Test-row indices of each of `k` stratified folds. Throws Fold when a fold
/// (train or test side) misses a class present in the labels.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

/// Rows of [0, n) not in `test` (which must be ascending).
std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> test);

}  // namespace dedmon::ml
