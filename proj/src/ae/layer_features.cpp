#include "dedmon/ae/layer_features.hpp"

#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/core/log.hpp"
#include "dedmon/signal/iir.hpp"

namespace dedmon::ae {

void AeFeatureConfig::validate(double sample_rate_hz) const {
    if (!signal::is_power_of_two(window_samples)) raise(ErrorKind::Config, "AE window length must be a power of two");
    if (!(highpass_cutoff_hz > 0.0) || !(highpass_cutoff_hz < sample_rate_hz / 2.0)) {
        raise(ErrorKind::Config, "high-pass cutoff must lie below Nyquist");
    }
    if (highpass_order < 1 || highpass_order > 8) raise(ErrorKind::Config, "high-pass order must be in 1..8");
    if (!(spectral.rolloff_fraction > 0.0) || spectral.rolloff_fraction > 1.0) {
        raise(ErrorKind::Config, "rolloff fraction must be in (0, 1]");
    }
    if (!(spectral.band_low_hz < spectral.band_high_hz) || !(spectral.band_span_hz > 0.0)) {
        raise(ErrorKind::Config, "invalid spectral band limits");
    }
}

const std::vector<std::string>& window_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const char* variant : {"raw_", "filtered_"}) {
            for (auto n : TimeDomainFeatures::names()) out.push_back(std::string(variant) + std::string(n));
            for (auto n : FrequencyDomainFeatures::names()) out.push_back(std::string(variant) + std::string(n));
        }
        return out;
    }();
    return names;
}

const std::vector<std::string>& layer_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& n : window_feature_names()) {
            out.push_back(n + "_mean");
            out.push_back(n + "_std");
        }
        return out;
    }();
    return names;
}

AeWindowFeatures window_features(std::span<const double> raw, std::span<const double> filtered,
                                 double sample_rate_hz, const FrequencyFeatureConfig& config) {
    AeWindowFeatures out{};
    std::size_t pos = 0;
    const auto spectra = signal::fft_pair(raw, filtered, sample_rate_hz);
    for (int variant = 0; variant < 2; ++variant) {
        const auto t = time_domain_features(variant == 0 ? raw : filtered).values();
        const auto f = frequency_domain_features(variant == 0 ? spectra.first : spectra.second, config).values();
        for (double v : t) out[pos++] = v;
        for (double v : f) out[pos++] = v;
    }
    return out;
}

AeLayerFeatures aggregate_windows(int layer_index, const std::vector<AeWindowFeatures>& windows) {
    if (windows.size() < 2) {
        raise(ErrorKind::LayerExtraction,
              "layer " + std::to_string(layer_index) + " has " + std::to_string(windows.size()) + " valid windows");
    }
    AeLayerFeatures layer;
    layer.layer_index = layer_index;
    layer.window_count = windows.size();
    const double n = static_cast<double>(windows.size());
    for (std::size_t j = 0; j < kWindowFeatureCount; ++j) {
        double sum = 0.0;
        for (const auto& w : windows) sum += w[j];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& w : windows) ss += (w[j] - mean) * (w[j] - mean);
        // Identical windows must aggregate to exactly v and 0.
        bool constant = true;
        for (const auto& w : windows) constant = constant && w[j] == windows.front()[j];
        layer.values[2 * j] = constant ? windows.front()[j] : mean;
        layer.values[2 * j + 1] = constant ? 0.0 : std::sqrt(ss / (n - 1.0));
    }
    return layer;
}

AeLayerFeatures extract_layer_features(const signal::AeRecording& recording, const LayerSegmentAE& segment,
                                       const AeFeatureConfig& config) {
    config.validate(recording.sample_rate_hz);
    const std::size_t w = config.window_samples;
    if (segment.end_sample > recording.samples.size() || segment.start_sample >= segment.end_sample) {
        raise(ErrorKind::InvalidInput, "segment outside recording " + recording.specimen_id);
    }
    if (segment.length() < 2 * w) {
        raise(ErrorKind::LayerExtraction, "layer " + std::to_string(segment.layer_index) + " shorter than two windows");
    }

    const std::span<const float> source(recording.samples.data() + segment.start_sample, segment.length());
    std::vector<double> segment_samples(source.begin(), source.end());
    const auto raw = winsorize_mad(segment_samples);
    const auto filter =
        signal::design_butterworth_highpass(config.highpass_cutoff_hz, config.highpass_order, recording.sample_rate_hz);
    const auto filtered = signal::apply_iir(filter, raw);

    const std::size_t count = raw.size() / w;
    std::vector<AeWindowFeatures> windows;
    windows.reserve(count);
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::span<const double> raw_w(raw.data() + i * w, w);
        const std::span<const double> filt_w(filtered.data() + i * w, w);
        try {
            windows.push_back(window_features(raw_w, filt_w, recording.sample_rate_hz, config.spectral));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::DegenerateWindow) throw;
            ++skipped;
        }
    }
    if (skipped > 0) {
        warn(recording.specimen_id + " layer " + std::to_string(segment.layer_index) + ": skipped " +
             std::to_string(skipped) + " degenerate windows");
    }
    auto layer = aggregate_windows(segment.layer_index, windows);
    layer.skipped_windows = skipped;
    return layer;
}

}  // namespace dedmon::ae
