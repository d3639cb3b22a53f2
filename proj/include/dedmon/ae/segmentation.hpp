#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dedmon/signal/recording.hpp"

namespace dedmon::ae {

struct AeSegmentationConfig {
    double quiet_threshold_db = 30.0;
    double min_quiet_duration_s = 4.5;
    double envelope_window_s = 0.01;
    double trim_head_s = 10.0;
    double trim_tail_s = 5.0;
    double reference_volts = 1e-6;

    /// Throws Config on non-positive durations or a non-finite threshold.
    void validate() const;
};

/// Half-open sample range [begin, end).
struct SampleInterval {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - begin; }
};

struct LayerSegmentAE {
    int layer_index = 0;
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;

    std::size_t length() const { return end_sample - start_sample; }
};

struct AeLayerDetection {
    std::vector<SampleInterval> intervals;  // untrimmed, temporal order
    bool degenerate = false;                // fewer than two layers
};

/// Block-RMS envelope in dB; runs of quiet blocks longer than the minimum
/// duration separate layers. Throws EmptySignal when nothing is active.
AeLayerDetection detect_layers_ae(const signal::AeRecording& recording, const AeSegmentationConfig& config);

/// Removes the head/tail trims. Throws SegmentTooShort if fewer than
/// `min_samples` remain.
LayerSegmentAE trim_segment(const SampleInterval& interval, int layer_index, const AeSegmentationConfig& config,
                            double sample_rate_hz, std::size_t min_samples = 2048);

/// Clamps samples to median +- 3 * 1.4826 * MAD. Returns the input unchanged
/// when MAD is zero. Requires at least 3 samples.
std::vector<double> winsorize_mad(std::span<const double> samples);

}  // namespace dedmon::ae
