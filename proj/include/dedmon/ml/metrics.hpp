#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dedmon/ml/model.hpp"

namespace dedmon::ml {

/// Defect (Hole3mm or Hole5mm) is the positive class.
struct BinaryCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;
    std::size_t total() const { return tp + fp + fn + tn; }
    bool operator==(const BinaryCounts&) const = default;
};

struct RunStats {
    std::size_t runs = 0;
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    double f1_mean = 0.0;
    double f1_std = 0.0;
    double auc_mean = 0.0;
    double auc_std = 0.0;
};

using ConfusionMatrix = std::array<std::array<std::size_t, kClassCount>, kClassCount>;  // [truth][predicted]

struct MetricsReport {
    std::string classifier;
    std::string modality;  // ae_only, camera_only or multimodal
    std::size_t test_rows = 0;
    double accuracy = 0.0;
    double precision = 0.0;  // binarized
    double recall = 0.0;
    double f1 = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double auc_roc = 0.0;  // macro one-vs-rest
    ConfusionMatrix confusion{};
    BinaryCounts binarized;
    std::map<int, double> per_layer_accuracy;
    std::optional<RunStats> run_stats;
};

bool is_defect(int label);

/// Precision, recall and F1 from binarized counts; 0 where undefined.
struct BinaryScores {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};
BinaryScores binary_scores(const BinaryCounts& counts);

/// Throws Schema on length mismatch. `proba` may be empty, leaving AUC at 0.
MetricsReport classification_metrics(std::span<const int> truth, std::span<const int> predicted,
                                     std::span<const Proba> proba);

/// Trapezoidal ROC area for scores against 0/1 targets; tied scores move
/// together. Returns 0.5 without both classes present.
double roc_auc(std::span<const double> scores, std::span<const int> positive);

/// Mean of one-vs-rest AUCs over classes with positives and negatives.
double macro_auc(std::span<const int> truth, std::span<const Proba> proba);

/// Accuracy on each layer's rows. Layers listed in `expected` but absent from
/// `layers` are omitted with a warning.
std::map<int, double> layerwise_accuracy(std::span<const int> truth, std::span<const int> predicted,
                                         std::span<const int> layers, std::span<const int> expected = {});

}  // namespace dedmon::ml
