#pragma once

#include <array>
#include <span>
#include <string_view>

#include "dedmon/signal/fft.hpp"

namespace dedmon::ae {

inline constexpr std::size_t kTimeFeatureCount = 16;
inline constexpr std::size_t kFrequencyFeatureCount = 20;
inline constexpr std::size_t kVariantFeatureCount = kTimeFeatureCount + kFrequencyFeatureCount;
inline constexpr std::size_t kSpectralBandCount = 8;

struct TimeDomainFeatures {
    double mean = 0.0;
    double variance = 0.0;   // n-1
    double std = 0.0;        // n-1
    double skewness = 0.0;   // population moments
    double kurtosis = 0.0;   // population, non-excess
    double maa = 0.0;        // mean |x|
    double rms = 0.0;
    double peak = 0.0;       // max |x|
    double peak_to_peak = 0.0;
    double crest_factor = 0.0;
    double impulse_factor = 0.0;
    double shape_factor = 0.0;
    double clearance_factor = 0.0;
    double abs_energy = 0.0;  // sum x^2
    double zero_crossings = 0.0;
    double mad = 0.0;         // median |x - median|

    std::array<double, kTimeFeatureCount> values() const;
    static const std::array<std::string_view, kTimeFeatureCount>& names();
};

/// Throws DegenerateWindow when the window has zero sample variance.
TimeDomainFeatures time_domain_features(std::span<const double> window);

struct FrequencyFeatureConfig {
    double split_frequency_hz = 150e3;  // low/high boundary of the energy ratio
    double band_low_hz = 150e3;
    double band_high_hz = 250e3;
    double band_span_hz = 250e3;        // equal-width bands cover [0, span]
    double rolloff_fraction = 0.85;
    double high_band_floor = 1e-30;
};

struct FrequencyDomainFeatures {
    double centroid_hz = 0.0;
    double bandwidth_hz = 0.0;
    double spectral_skewness = 0.0;
    double spectral_kurtosis = 0.0;
    double spectral_entropy = 0.0;  // nats
    double spectral_flatness = 0.0;
    double rolloff_hz = 0.0;
    double median_frequency_hz = 0.0;
    double peak_frequency_hz = 0.0;
    double peak_magnitude = 0.0;
    double energy_ratio_lowhigh = 0.0;
    double band_energy = 0.0;
    std::array<double, kSpectralBandCount> band_energies{};

    std::array<double, kFrequencyFeatureCount> values() const;
    static const std::array<std::string_view, kFrequencyFeatureCount>& names();
};

/// Power is |X_k|^2 of the one-sided spectrum. Throws DegenerateWindow on an
/// all-zero spectrum.
FrequencyDomainFeatures frequency_domain_features(const signal::Spectrum& spectrum,
                                                  const FrequencyFeatureConfig& config = {});

}  // namespace dedmon::ae
