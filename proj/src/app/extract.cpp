#include "dedmon/app/extract.hpp"

namespace dedmon::app {

void ExtractionConfig::validate() const {
    ae_segmentation.validate();
    ae_features.validate(500000.0);
    vision_segmentation.validate();
}

ExtractionConfig extraction_for_profile(const synth::SynthProfile& profile) {
    ExtractionConfig c;
    c.ae_segmentation.min_quiet_duration_s = profile.min_quiet_duration_s;
    c.ae_segmentation.trim_head_s = profile.trim_head_s;
    c.ae_segmentation.trim_tail_s = profile.trim_tail_s;
    c.vision_segmentation.min_quiet_duration_s = profile.min_quiet_duration_s;
    c.vision_segmentation.trim_head_s = profile.trim_head_s;
    c.vision_segmentation.trim_tail_s = profile.trim_tail_s;
    return c;
}

AeExtraction extract_ae(const signal::AeRecording& recording, const ExtractionConfig& config) {
    config.ae_features.validate(recording.sample_rate_hz);
    AeExtraction out;
    out.detection = ae::detect_layers_ae(recording, config.ae_segmentation);
    const std::size_t min_samples = 2 * config.ae_features.window_samples;
    for (std::size_t i = 0; i < out.detection.intervals.size(); ++i) {
        out.segments.push_back(ae::trim_segment(out.detection.intervals[i], static_cast<int>(i) + 1,
                                                config.ae_segmentation, recording.sample_rate_hz, min_samples));
        out.layers.push_back(ae::extract_layer_features(recording, out.segments.back(), config.ae_features));
    }
    return out;
}

VisionExtraction extract_vision(const vision::FrameStream& stream, const ExtractionConfig& config) {
    VisionExtraction out;
    out.detection = vision::detect_layers_vision(stream, config.vision_segmentation);
    for (const vision::FrameRange& r : out.detection.ranges) {
        out.ranges.push_back(vision::trim_frame_range(r, config.vision_segmentation, out.detection.frame_rate_hz));
        out.layers.push_back(vision::extract_layer_vision(stream, out.ranges.back(), config.vision_segmentation));
    }
    return out;
}

fusion::SpecimenFeatures specimen_features(const std::string& specimen_id, fusion::Condition condition,
                                           const AeExtraction& ae, const VisionExtraction& vision) {
    fusion::SpecimenFeatures s;
    s.specimen_id = specimen_id;
    s.condition = condition;
    s.ae = ae.layers;
    s.vision = vision.layers;
    return s;
}

}  // namespace dedmon::app
