#include "dedmon/ae/window_features.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dedmon/core/error.hpp"
#include "dedmon/core/stats.hpp"

namespace dedmon::ae {

std::array<double, kTimeFeatureCount> TimeDomainFeatures::values() const {
    return {mean,           variance,       std,          skewness,         kurtosis,   maa,
            rms,            peak,           peak_to_peak, crest_factor,     impulse_factor,
            shape_factor,   clearance_factor, abs_energy, zero_crossings,   mad};
}

const std::array<std::string_view, kTimeFeatureCount>& TimeDomainFeatures::names() {
    static const std::array<std::string_view, kTimeFeatureCount> n = {
        "mean",           "variance",       "std",          "skewness",         "kurtosis",   "maa",
        "rms",            "peak",           "peak_to_peak", "crest_factor",     "impulse_factor",
        "shape_factor",   "clearance_factor", "abs_energy", "zero_crossings",   "mad"};
    return n;
}

TimeDomainFeatures time_domain_features(std::span<const double> window) {
    const std::size_t n = window.size();
    if (n < 2) raise(ErrorKind::DegenerateWindow, "window needs at least two samples");
    const double nd = static_cast<double>(n);

    double sum = 0.0, sum_abs = 0.0, sum_sq = 0.0, sum_sqrt_abs = 0.0;
    double lo = window[0], hi = window[0], peak = 0.0;
    std::size_t crossings = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = window[i];
        const double ax = std::abs(x);
        sum += x;
        sum_abs += ax;
        sum_sq += x * x;
        sum_sqrt_abs += std::sqrt(ax);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
        peak = std::max(peak, ax);
        if (i > 0 && ((window[i - 1] < 0.0) != (x < 0.0))) ++crossings;
    }
    const double mu = sum / nd;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : window) {
        const double d = x - mu;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    if (!(m2 > 0.0)) raise(ErrorKind::DegenerateWindow, "window has zero variance");

    TimeDomainFeatures f;
    f.mean = mu;
    f.variance = m2 / (nd - 1.0);
    f.std = std::sqrt(f.variance);
    const double pop_var = m2 / nd;
    f.skewness = (m3 / nd) / std::pow(pop_var, 1.5);
    f.kurtosis = (m4 / nd) / (pop_var * pop_var);
    f.maa = sum_abs / nd;
    f.rms = std::sqrt(sum_sq / nd);
    f.peak = peak;
    f.peak_to_peak = hi - lo;
    f.crest_factor = f.rms > 0.0 ? peak / f.rms : 0.0;
    f.impulse_factor = f.maa > 0.0 ? peak / f.maa : 0.0;
    f.shape_factor = f.maa > 0.0 ? f.rms / f.maa : 0.0;
    const double root_mean = sum_sqrt_abs / nd;
    f.clearance_factor = root_mean > 0.0 ? peak / (root_mean * root_mean) : 0.0;
    f.abs_energy = sum_sq;
    f.zero_crossings = static_cast<double>(crossings);

    std::vector<double> scratch(window.begin(), window.end());
    const double med = stats::median_inplace(scratch);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = std::abs(window[i] - med);
    f.mad = stats::median_inplace(scratch);
    return f;
}

std::array<double, kFrequencyFeatureCount> FrequencyDomainFeatures::values() const {
    std::array<double, kFrequencyFeatureCount> v{};
    const std::array<double, 12> head = {centroid_hz,         bandwidth_hz,       spectral_skewness,
                                         spectral_kurtosis,   spectral_entropy,   spectral_flatness,
                                         rolloff_hz,          median_frequency_hz, peak_frequency_hz,
                                         peak_magnitude,      energy_ratio_lowhigh, band_energy};
    std::copy(head.begin(), head.end(), v.begin());
    std::copy(band_energies.begin(), band_energies.end(), v.begin() + head.size());
    return v;
}

const std::array<std::string_view, kFrequencyFeatureCount>& FrequencyDomainFeatures::names() {
    static const std::array<std::string_view, kFrequencyFeatureCount> n = {
        "spectral_centroid", "spectral_bandwidth", "spectral_skewness", "spectral_kurtosis",
        "spectral_entropy",  "spectral_flatness",  "spectral_rolloff",  "median_frequency",
        "peak_frequency",    "peak_magnitude",     "energy_ratio_lowhigh", "band_energy",
        "band0_energy",      "band1_energy",       "band2_energy",      "band3_energy",
        "band4_energy",      "band5_energy",       "band6_energy",      "band7_energy"};
    return n;
}

FrequencyDomainFeatures frequency_domain_features(const signal::Spectrum& spectrum,
                                                  const FrequencyFeatureConfig& config) {
    const auto& mag = spectrum.magnitudes;
    const std::size_t bins = mag.size();
    if (bins == 0) raise(ErrorKind::DegenerateWindow, "empty spectrum");

    std::vector<double> power(bins);
    double total = 0.0, weighted = 0.0;
    std::size_t peak_bin = 0;
    for (std::size_t k = 0; k < bins; ++k) {
        power[k] = mag[k] * mag[k];
        total += power[k];
        weighted += spectrum.frequency(k) * power[k];
        if (power[k] > power[peak_bin]) peak_bin = k;
    }
    if (!(total > 0.0)) raise(ErrorKind::DegenerateWindow, "spectrum carries no energy");

    FrequencyDomainFeatures f;
    f.centroid_hz = weighted / total;

    double m2 = 0.0, m3 = 0.0, m4 = 0.0, entropy = 0.0, log_sum = 0.0;
    const double log_total = std::log(total);
    const double log_floor = std::log(config.high_band_floor);
    double low = 0.0, high = 0.0;
    const double band_width = config.band_span_hz / static_cast<double>(kSpectralBandCount);
    for (std::size_t k = 0; k < bins; ++k) {
        const double freq = spectrum.frequency(k);
        const double p = power[k] / total;
        const double d = freq - f.centroid_hz;
        m2 += d * d * p;
        m3 += d * d * d * p;
        m4 += d * d * d * d * p;
        const double log_power = power[k] > 0.0 ? std::log(power[k]) : -HUGE_VAL;
        if (p > 0.0) entropy -= p * (log_power - log_total);
        log_sum += std::max(log_power, log_floor);
        if (freq < config.split_frequency_hz) {
            low += power[k];
        } else {
            high += power[k];
        }
        if (freq >= config.band_low_hz && freq <= config.band_high_hz) f.band_energy += power[k];
        auto band = static_cast<std::size_t>(freq / band_width);
        band = std::min(band, kSpectralBandCount - 1);
        f.band_energies[band] += power[k];
    }
    f.bandwidth_hz = std::sqrt(m2);
    if (f.bandwidth_hz > 0.0) {
        f.spectral_skewness = m3 / (m2 * f.bandwidth_hz);
        f.spectral_kurtosis = m4 / (m2 * m2);
    }
    f.spectral_entropy = entropy;
    const double arithmetic = total / static_cast<double>(bins);
    f.spectral_flatness = std::exp(log_sum / static_cast<double>(bins)) / arithmetic;

    double cumulative = 0.0;
    bool have_median = false, have_rolloff = false;
    for (std::size_t k = 0; k < bins; ++k) {
        cumulative += power[k];
        if (!have_median && cumulative >= 0.5 * total) {
            f.median_frequency_hz = spectrum.frequency(k);
            have_median = true;
        }
        if (!have_rolloff && cumulative >= config.rolloff_fraction * total) {
            f.rolloff_hz = spectrum.frequency(k);
            have_rolloff = true;
        }
    }
    if (!have_rolloff) f.rolloff_hz = spectrum.frequency(bins - 1);
    if (!have_median) f.median_frequency_hz = spectrum.frequency(bins - 1);

    f.peak_frequency_hz = spectrum.frequency(peak_bin);
    f.peak_magnitude = mag[peak_bin];
    f.energy_ratio_lowhigh = low / std::max(high, config.high_band_floor);
    return f;
}

}  // namespace dedmon::ae
