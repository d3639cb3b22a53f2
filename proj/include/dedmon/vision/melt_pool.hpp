#pragma once

#include <array>
#include <string>
#include <vector>

#include "dedmon/vision/frame.hpp"

namespace dedmon::vision {

struct VisionSegmentationConfig {
    double quiet_fraction = 0.10;
    double min_quiet_duration_s = 4.5;
    double threshold_fraction = 0.80;
    double trim_head_s = 10.0;
    double trim_tail_s = 5.0;
    int morph_radius_px = 1;
    /// Streams whose active-frame mean stays below this (counts) hold no melt
    /// pool at all.
    double min_active_intensity = 100.0;
    /// Masks covering more of the frame than this are rejected.
    double max_area_fraction = 0.5;

    void validate() const;
};

struct FrameRange {
    int layer_index = 0;
    std::size_t begin = 0;  // half-open frame indices
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
};

struct VisionLayerDetection {
    std::vector<FrameRange> ranges;  // untrimmed, 1-indexed layers
    bool degenerate = false;
    double frame_rate_hz = 0.0;
};

/// Frame-mean intensity scan; dark runs (below quiet_fraction times the mean
/// of frames above the stream median) longer than the minimum duration split
/// layers. Throws EmptySignal when no frame is active.
VisionLayerDetection detect_layers_vision(const FrameStream& stream, const VisionSegmentationConfig& config);

/// Applies head/tail trims in seconds. Throws SegmentTooShort when fewer
/// than two frames remain.
FrameRange trim_frame_range(const FrameRange& range, const VisionSegmentationConfig& config, double frame_rate_hz);

/// Threshold at threshold_fraction * max, opening then closing with a square
/// element, then keep the largest 8-connected component. A frame with zero
/// maximum yields an empty mask.
Mask segment_melt_pool(const Frame& frame, const VisionSegmentationConfig& config);

Mask erode(const Mask& mask, int radius);
Mask dilate(const Mask& mask, int radius);
Mask largest_component(const Mask& mask);

struct MeltPoolGeometry {
    double contour_area_um2 = 0.0;
    double circle_radius_um = 0.0;
    double circle_area_um2 = 0.0;
    double core2circle_ratio = 0.0;
    double convexity = 0.0;
    double bbox_length_um = 0.0;
    double bbox_width_um = 0.0;
    bool valid = false;
};

inline constexpr std::size_t kGeometryFieldCount = 7;
inline constexpr std::size_t kVisionFeatureCount = 2 * kGeometryFieldCount + 2;  // 16

std::array<double, kGeometryFieldCount> geometry_values(const MeltPoolGeometry& g);
const std::array<std::string, kGeometryFieldCount>& geometry_field_names();

/// Contour area is the foreground pixel count. The enclosing circle and hull
/// are taken over pixel corners so both contain every foreground pixel; the
/// box is aligned with the principal axes of the pixel-centre covariance.
MeltPoolGeometry melt_pool_geometry(const Mask& mask, double pixel_size_um, double max_area_fraction = 0.5);

struct VisionLayerFeatures {
    int layer_index = 0;
    std::array<double, kVisionFeatureCount> values{};  // field_mean, field_std..., frame_count, time_span
    std::size_t frame_count = 0;
    double time_span_s = 0.0;
};

const std::vector<std::string>& vision_feature_names();

/// Mean and n-1 std over valid frames. Throws LayerExtraction with fewer
/// than two valid frames.
VisionLayerFeatures aggregate_layer_vision(int layer_index, const std::vector<MeltPoolGeometry>& geometries,
                                           const std::vector<double>& timestamps);

/// segment + geometry + aggregate over one trimmed frame range.
VisionLayerFeatures extract_layer_vision(const FrameStream& stream, const FrameRange& range,
                                         const VisionSegmentationConfig& config);

}  // namespace dedmon::vision
