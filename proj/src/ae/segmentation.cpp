#include "dedmon/ae/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/core/log.hpp"
#include "dedmon/core/stats.hpp"
#include "dedmon/signal/decibel.hpp"

namespace dedmon::ae {

void AeSegmentationConfig::validate() const {
    if (!std::isfinite(quiet_threshold_db)) raise(ErrorKind::Config, "ae quiet threshold must be finite");
    if (!(min_quiet_duration_s > 0.0) || !(envelope_window_s > 0.0) || !(trim_head_s > 0.0) ||
        !(trim_tail_s > 0.0)) {
        raise(ErrorKind::Config, "ae segmentation durations must be positive");
    }
    if (!(reference_volts > 0.0)) raise(ErrorKind::Config, "ae dB reference must be positive");
}

AeLayerDetection detect_layers_ae(const signal::AeRecording& recording, const AeSegmentationConfig& config) {
    config.validate();
    const double rate = recording.sample_rate_hz;
    if (!(rate > 0.0)) raise(ErrorKind::InvalidInput, "sample rate must be positive");
    const auto block = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(config.envelope_window_s * rate)));
    const std::size_t n = recording.samples.size();
    if (n < 2 * block) raise(ErrorKind::InvalidInput, "recording shorter than two envelope windows");

    const std::size_t blocks = (n + block - 1) / block;
    std::vector<char> quiet(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * block;
        const std::size_t hi = std::min(n, lo + block);
        double ss = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const double x = recording.samples[i];
            ss += x * x;
        }
        const double rms = std::sqrt(ss / static_cast<double>(hi - lo));
        quiet[b] = signal::amplitude_db(rms, config.reference_volts) < config.quiet_threshold_db;
    }

    // Registered quiet runs, as block ranges.
    std::vector<std::pair<std::size_t, std::size_t>> separators;
    for (std::size_t b = 0; b < blocks;) {
        if (!quiet[b]) {
            ++b;
            continue;
        }
        std::size_t e = b;
        while (e < blocks && quiet[e]) ++e;
        const std::size_t s_lo = b * block;
        const std::size_t s_hi = std::min(n, e * block);
        if (static_cast<double>(s_hi - s_lo) / rate > config.min_quiet_duration_s) separators.emplace_back(b, e);
        b = e;
    }

    AeLayerDetection detection;
    auto emit = [&](std::size_t first_block, std::size_t end_block) {
        while (first_block < end_block && quiet[first_block]) ++first_block;
        while (end_block > first_block && quiet[end_block - 1]) --end_block;
        if (first_block >= end_block) return;
        detection.intervals.push_back({first_block * block, std::min(n, end_block * block)});
    };
    std::size_t cursor = 0;
    for (const auto& [q_begin, q_end] : separators) {
        emit(cursor, q_begin);
        cursor = q_end;
    }
    emit(cursor, blocks);

    if (detection.intervals.empty()) {
        raise(ErrorKind::EmptySignal, "no active interval in recording " + recording.specimen_id);
    }
    if (detection.intervals.size() < 2) {
        detection.degenerate = true;
        warn("degenerate recording " + recording.specimen_id + ": fewer than 2 layers detected");
    }
    return detection;
}

LayerSegmentAE trim_segment(const SampleInterval& interval, int layer_index, const AeSegmentationConfig& config,
                            double sample_rate_hz, std::size_t min_samples) {
    const auto head = static_cast<std::size_t>(std::llround(config.trim_head_s * sample_rate_hz));
    const auto tail = static_cast<std::size_t>(std::llround(config.trim_tail_s * sample_rate_hz));
    const std::size_t length = interval.end > interval.begin ? interval.end - interval.begin : 0;
    if (length < head + tail + min_samples) {
        raise(ErrorKind::SegmentTooShort,
              "layer " + std::to_string(layer_index) + " lasts " + std::to_string(length / sample_rate_hz) +
                  " s, too short for trims of " + std::to_string(config.trim_head_s) + " s + " +
                  std::to_string(config.trim_tail_s) + " s");
    }
    return {layer_index, interval.begin + head, interval.end - tail};
}

std::vector<double> winsorize_mad(std::span<const double> samples) {
    if (samples.size() < 3) raise(ErrorKind::InvalidInput, "winsorization needs at least 3 samples");
    std::vector<double> scratch(samples.begin(), samples.end());
    const double med = stats::median_inplace(scratch);
    for (std::size_t i = 0; i < samples.size(); ++i) scratch[i] = std::abs(samples[i] - med);
    const double mad = stats::median_inplace(scratch);
    std::vector<double> out(samples.begin(), samples.end());
    if (!(mad > 0.0)) return out;
    const double sigma = 1.4826 * mad;
    const double lo = med - 3.0 * sigma;
    const double hi = med + 3.0 * sigma;
    for (double& x : out) x = std::clamp(x, lo, hi);
    return out;
}

}  // namespace dedmon::ae
