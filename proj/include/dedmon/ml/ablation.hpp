#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dedmon/fusion/anova.hpp"
#include "dedmon/fusion/scaler.hpp"
#include "dedmon/fusion/table.hpp"
#include "dedmon/ml/grid_search.hpp"
#include "dedmon/ml/metrics.hpp"
#include "dedmon/ml/model.hpp"
#include "dedmon/ml/split.hpp"

namespace dedmon::ml {

enum class FeatureSet { AeOnly, CameraOnly, Multimodal };
inline constexpr FeatureSet kAllFeatureSets[] = {FeatureSet::AeOnly, FeatureSet::CameraOnly, FeatureSet::Multimodal};
const char* to_string(FeatureSet set);
FeatureSet parse_feature_set(std::string_view text);

struct PreprocessConfig {
    std::size_t top_k_ae = 20;
    std::size_t top_k_vision = 8;
    std::size_t smote_k = 5;
    /// SMOTE fills every class up to this multiple of the largest real class.
    double smote_target_multiplier = 2.0;
    double noise_fraction = 0.05;
    std::size_t noise_copies = 1;
    bool augment = true;
    void validate() const;
};

/// Selection, scaling and augmentation fitted on one training split.
struct PreparedData {
    FeatureSet set = FeatureSet::Multimodal;
    std::vector<fusion::FeatureScore> anova;  // training rows, every candidate column
    std::vector<std::string> selected;     // before zero-variance drops
    fusion::ScalerParams scaler;
    fusion::FeatureTable train;  // standardized, augmented
    fusion::FeatureTable test;   // standardized
};

/// ANOVA ranking on `train` restricted to the set's modality, top-k
/// selection, z-scoring fitted on the training rows, then SMOTE and Gaussian
/// copies appended to the training side only.
PreparedData prepare_features(const fusion::FeatureTable& train, const fusion::FeatureTable& test, FeatureSet set,
                              const PreprocessConfig& config, std::uint64_t seed);

struct AblationConfig {
    double train_fraction = 0.85;
    PreprocessConfig preprocess;
    std::map<ModelKind, Grid> grids;
    std::size_t cv_folds = 3;
    std::size_t mlp_seeds = 5;
    /// Augment before splitting, as the original protocol reads. Test rows
    /// may then include synthetic neighbours of training rows.
    bool paper_order = false;
    std::vector<int> expected_layers{2, 3, 4, 5};
    std::size_t jobs = 1;
};

/// Small default grids inside the searchable ranges.
std::map<ModelKind, Grid> default_grids();

struct AblationCell {
    ModelKind kind = ModelKind::LogisticRegression;
    FeatureSet set = FeatureSet::Multimodal;
    GridSearchResult search;
    std::vector<TrainedModel> models;  // one per seed; the first is reported
    MetricsReport report;
};

struct PreparedSplit {
    SplitIndices split;  // row indices into the real rows of the dataset
    std::map<FeatureSet, PreparedData> prepared;
};

struct AblationResult {
    SplitIndices split;
    std::map<FeatureSet, PreparedData> prepared;
    std::vector<AblationCell> cells;  // classifier-major, then feature set
};

/// Split of the real rows and per-set preprocessing. Throws Split if a
/// synthetic row would reach a test set.
PreparedSplit prepare_ablation(const fusion::FeatureTable& dataset, const AblationConfig& config, std::uint64_t seed);

/// Grid search on the real training rows, then one fit per seed on the
/// augmented training table.
struct TrainedCell {
    GridSearchResult search;
    std::vector<TrainedModel> models;
};
TrainedCell train_cell(ModelKind kind, const PreparedData& data, const Grid& grid, const AblationConfig& config,
                       std::uint64_t seed);

/// Metrics of the first model on the standardized test table, with seed
/// statistics when there are several models.
MetricsReport evaluate_cell(ModelKind kind, FeatureSet set, const std::vector<TrainedModel>& models,
                            const fusion::FeatureTable& test, const AblationConfig& config);

/// The grids to use: the configured ones, or default_grids() when empty.
std::map<ModelKind, Grid> effective_grids(const AblationConfig& config);

/// Every classifier on every feature set over one shared split.
AblationResult evaluate_ablation(const fusion::FeatureTable& dataset, const AblationConfig& config, std::uint64_t seed);

}  // namespace dedmon::ml
