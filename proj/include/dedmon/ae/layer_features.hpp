#pragma once

#include <array>
#include <string>
#include <vector>

#include "dedmon/ae/segmentation.hpp"
#include "dedmon/ae/window_features.hpp"

namespace dedmon::ae {

inline constexpr std::size_t kWindowFeatureCount = 2 * kVariantFeatureCount;  // 72
inline constexpr std::size_t kLayerFeatureCount = 2 * kWindowFeatureCount;    // 144

struct AeFeatureConfig {
    std::size_t window_samples = 1024;
    double highpass_cutoff_hz = 150e3;
    int highpass_order = 4;
    FrequencyFeatureConfig spectral;

    void validate(double sample_rate_hz) const;
};

/// raw_* (winsorized, unfiltered) then filtered_* (high-passed) values.
using AeWindowFeatures = std::array<double, kWindowFeatureCount>;

const std::vector<std::string>& window_feature_names();

/// `<window feature>_mean`, `<window feature>_std`, interleaved.
const std::vector<std::string>& layer_feature_names();

struct AeLayerFeatures {
    int layer_index = 0;
    std::array<double, kLayerFeatureCount> values{};
    std::size_t window_count = 0;
    std::size_t skipped_windows = 0;
};

/// Features of one raw window and its filtered twin. Throws DegenerateWindow
/// if either is degenerate.
AeWindowFeatures window_features(std::span<const double> raw, std::span<const double> filtered,
                                 double sample_rate_hz, const FrequencyFeatureConfig& config);

/// Winsorize the segment, high-pass it once, cut non-overlapping windows
/// (trailing remainder dropped), and aggregate mean/std over valid windows.
AeLayerFeatures extract_layer_features(const signal::AeRecording& recording, const LayerSegmentAE& segment,
                                       const AeFeatureConfig& config = {});

/// Mean and n-1 std of each window feature.
AeLayerFeatures aggregate_windows(int layer_index, const std::vector<AeWindowFeatures>& windows);

}  // namespace dedmon::ae
