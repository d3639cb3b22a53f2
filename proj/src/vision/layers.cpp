#include <algorithm>
#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/core/log.hpp"
#include "dedmon/core/stats.hpp"
#include "dedmon/vision/melt_pool.hpp"

namespace dedmon::vision {

void VisionSegmentationConfig::validate() const {
    if (!(quiet_fraction > 0.0 && quiet_fraction < 1.0)) raise(ErrorKind::Config, "quiet_fraction must be in (0, 1)");
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
        raise(ErrorKind::Config, "threshold_fraction must be in (0, 1)");
    }
    if (!(min_quiet_duration_s > 0.0) || !(trim_head_s > 0.0) || !(trim_tail_s > 0.0)) {
        raise(ErrorKind::Config, "vision segmentation durations must be positive");
    }
    if (morph_radius_px < 0) raise(ErrorKind::Config, "morphology radius must be non-negative");
    if (!(max_area_fraction > 0.0 && max_area_fraction <= 1.0)) raise(ErrorKind::Config, "max_area_fraction out of range");
    if (!(min_active_intensity >= 0.0)) raise(ErrorKind::Config, "min_active_intensity must be non-negative");
}

VisionLayerDetection detect_layers_vision(const FrameStream& stream, const VisionSegmentationConfig& config) {
    config.validate();
    validate(stream);
    const std::size_t n = stream.frames.size();
    if (n < 2) raise(ErrorKind::InvalidInput, "frame stream needs at least two frames");

    std::vector<double> dts;
    dts.reserve(n - 1);
    for (std::size_t i = 1; i < n; ++i) dts.push_back(stream.frames[i].timestamp_s - stream.frames[i - 1].timestamp_s);
    const double dt = stats::median(dts);

    std::vector<double> level(n);
    for (std::size_t i = 0; i < n; ++i) level[i] = stream.frames[i].mean_intensity();
    const double med = stats::median(level);
    double active_sum = 0.0;
    std::size_t active_count = 0;
    // Frames at or above the median: the active phases dominate a build, and
    // identical active frames must still count.
    for (double v : level) {
        if (v >= med) {
            active_sum += v;
            ++active_count;
        }
    }
    const double active_mean = active_count > 0 ? active_sum / static_cast<double>(active_count) : 0.0;
    if (active_count == 0 || !(active_mean > config.min_active_intensity)) {
        raise(ErrorKind::EmptySignal, "no active frames in stream " + stream.specimen_id);
    }
    const double quiet_level = config.quiet_fraction * active_mean;

    std::vector<char> quiet(n);
    for (std::size_t i = 0; i < n; ++i) quiet[i] = level[i] < quiet_level;

    VisionLayerDetection detection;
    detection.frame_rate_hz = 1.0 / dt;
    auto emit = [&](std::size_t lo, std::size_t hi) {
        while (lo < hi && quiet[lo]) ++lo;
        while (hi > lo && quiet[hi - 1]) --hi;
        if (lo >= hi) return;
        detection.ranges.push_back({static_cast<int>(detection.ranges.size()) + 1, lo, hi});
    };
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < n;) {
        if (!quiet[i]) {
            ++i;
            continue;
        }
        std::size_t e = i;
        while (e < n && quiet[e]) ++e;
        if (static_cast<double>(e - i) * dt > config.min_quiet_duration_s) {
            emit(cursor, i);
            cursor = e;
        }
        i = e;
    }
    emit(cursor, n);

    if (detection.ranges.empty()) raise(ErrorKind::EmptySignal, "no active frames in stream " + stream.specimen_id);
    if (detection.ranges.size() < 2) {
        detection.degenerate = true;
        warn("degenerate stream " + stream.specimen_id + ": fewer than 2 layers detected");
    }
    return detection;
}

FrameRange trim_frame_range(const FrameRange& range, const VisionSegmentationConfig& config, double frame_rate_hz) {
    const auto head = static_cast<std::size_t>(std::llround(config.trim_head_s * frame_rate_hz));
    const auto tail = static_cast<std::size_t>(std::llround(config.trim_tail_s * frame_rate_hz));
    if (range.size() < head + tail + 2) {
        raise(ErrorKind::SegmentTooShort, "vision layer " + std::to_string(range.layer_index) + " has only " +
                                              std::to_string(range.size()) + " frames before trimming");
    }
    return {range.layer_index, range.begin + head, range.end - tail};
}

}  // namespace dedmon::vision
