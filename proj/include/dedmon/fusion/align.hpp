#pragma once

#include <string>
#include <vector>

#include "dedmon/ae/layer_features.hpp"
#include "dedmon/fusion/table.hpp"
#include "dedmon/vision/melt_pool.hpp"

namespace dedmon::fusion {

struct SpecimenFeatures {
    std::string specimen_id;
    Condition condition = Condition::NoHole;
    std::vector<ae::AeLayerFeatures> ae;
    std::vector<vision::VisionLayerFeatures> vision;
};

struct LayerSample {
    std::string specimen_id;
    int layer_index = 0;
    Condition condition = Condition::NoHole;
    ae::AeLayerFeatures ae;
    vision::VisionLayerFeatures vision;
};

struct AlignmentConfig {
    int expected_layers = 5;
    int first_kept_layer = 2;
};

/// Pairs layer k of both modalities. Throws Alignment when either modality
/// does not carry exactly expected_layers layers for a specimen.
std::vector<LayerSample> align_modalities(const std::vector<SpecimenFeatures>& specimens,
                                          const AlignmentConfig& config = {});

/// One row per (specimen, layer) with the 144 AE columns.
FeatureTable ae_table(const std::vector<SpecimenFeatures>& specimens);
/// One row per (specimen, layer) with the 16 vision columns.
FeatureTable vision_table(const std::vector<SpecimenFeatures>& specimens);

/// AE columns then vision columns.
FeatureTable build_feature_table(const std::vector<LayerSample>& samples);

/// Same alignment rules applied to per-modality tables (e.g. read from CSV).
/// Specimens appear in order of first occurrence in the AE table.
FeatureTable align_tables(const FeatureTable& ae, const FeatureTable& vision, const AlignmentConfig& config = {});

}  // namespace dedmon::fusion
