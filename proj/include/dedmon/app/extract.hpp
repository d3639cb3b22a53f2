#pragma once

#include <vector>

#include "dedmon/ae/layer_features.hpp"
#include "dedmon/ae/segmentation.hpp"
#include "dedmon/fusion/align.hpp"
#include "dedmon/synth/generator.hpp"
#include "dedmon/vision/melt_pool.hpp"

namespace dedmon::app {

struct ExtractionConfig {
    ae::AeSegmentationConfig ae_segmentation;
    ae::AeFeatureConfig ae_features;
    vision::VisionSegmentationConfig vision_segmentation;
    void validate() const;
};

/// Segmentation durations matched to a generator profile.
ExtractionConfig extraction_for_profile(const synth::SynthProfile& profile);

struct AeExtraction {
    ae::AeLayerDetection detection;
    std::vector<ae::LayerSegmentAE> segments;  // trimmed
    std::vector<ae::AeLayerFeatures> layers;
};

struct VisionExtraction {
    vision::VisionLayerDetection detection;
    std::vector<vision::FrameRange> ranges;  // trimmed
    std::vector<vision::VisionLayerFeatures> layers;
};

AeExtraction extract_ae(const signal::AeRecording& recording, const ExtractionConfig& config);
VisionExtraction extract_vision(const vision::FrameStream& stream, const ExtractionConfig& config);

fusion::SpecimenFeatures specimen_features(const std::string& specimen_id, fusion::Condition condition,
                                           const AeExtraction& ae, const VisionExtraction& vision);

}  // namespace dedmon::app
