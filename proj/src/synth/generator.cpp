#include "dedmon/synth/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dedmon/core/error.hpp"
#include "dedmon/core/rng.hpp"

namespace dedmon::synth {

namespace {

// Stream identifiers under a specimen seed.
constexpr std::uint64_t kStreamSignature = 1;
constexpr std::uint64_t kStreamAeLayer = 2;
constexpr std::uint64_t kStreamAeDwell = 3;
constexpr std::uint64_t kStreamLayerShape = 4;
constexpr std::uint64_t kStreamFrame = 5;

constexpr int kModulationTones = 6;
constexpr std::size_t kModulationStep = 250;  // samples between envelope knots
constexpr double kBurstSpan = 8.0;            // decay constants rendered per burst
// The 80 % contour of a unit-peak Gaussian sits at 0.668 sigma.
constexpr double kContourSigma = 0.668047;

double lognormal_factor(CounterRng& rng, double spread) { return std::exp(spread * rng.normal()); }

/// Signature jittered once per specimen so that specimens of one condition
/// overlap partially with their neighbours.
ConditionSignature specimen_signature(const ConditionSignature& base, std::uint64_t seed) {
    CounterRng rng(derive_key(seed, {kStreamSignature}));
    const double s = base.specimen_spread;
    ConditionSignature sig = base;
    sig.burst_rate_hz *= lognormal_factor(rng, s);
    sig.burst_amplitude_scale *= lognormal_factor(rng, s);
    sig.slow_modulation_std *= lognormal_factor(rng, s);
    const double q = std::sqrt(1.0 - base.melt_ellipse_eccentricity_mean * base.melt_ellipse_eccentricity_mean);
    const double q_jit = std::clamp(q * lognormal_factor(rng, 0.5 * s), 0.3, 0.99);
    sig.melt_ellipse_eccentricity_mean = std::sqrt(1.0 - q_jit * q_jit);
    sig.melt_radius_mean_px *= lognormal_factor(rng, 0.5 * s);
    sig.melt_radius_std_px *= lognormal_factor(rng, s);
    return sig;
}

struct BlobShape {
    double radius_px;
    double axis_ratio;
    double angle;
    double cx;
    double cy;
};

}  // namespace

const char* to_string(ProfileName p) {
    return p == ProfileName::PaperScale ? "paper_scale" : "desk";
}

ProfileName parse_profile(const std::string& text) {
    if (text == "desk") return ProfileName::Desk;
    if (text == "paper_scale") return ProfileName::PaperScale;
    raise(ErrorKind::Config, "unknown profile '" + text + "' (expected desk or paper_scale)");
}

SynthProfile SynthProfile::desk() { return SynthProfile{}; }

SynthProfile SynthProfile::paper_scale() {
    SynthProfile p;
    p.name = ProfileName::PaperScale;
    p.layer_active_s = 40.0;
    p.dwell_s = 5.0;
    p.trim_head_s = 10.0;
    p.trim_tail_s = 5.0;
    p.min_quiet_duration_s = 4.5;
    p.frame_width = 800;
    p.frame_height = 800;
    return p;
}

std::size_t SynthProfile::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s() * sample_rate_hz));
}

std::size_t SynthProfile::frame_count() const {
    return static_cast<std::size_t>(std::llround(duration_s() * fps));
}

void SynthProfile::validate() const {
    if (!(sample_rate_hz > 0.0) || !(fps > 0.0)) raise(ErrorKind::Config, "profile rates must be positive");
    if (layers < 1) raise(ErrorKind::Config, "profile needs at least one layer");
    if (frame_width < 16 || frame_height < 16) raise(ErrorKind::Config, "profile frames must be at least 16x16");
    if (specimens_per_condition < 1) raise(ErrorKind::Config, "specimens_per_condition must be positive");
    if (!(dwell_s > min_quiet_duration_s)) {
        raise(ErrorKind::Config, "dwell_s must exceed min_quiet_duration_s or layers cannot be separated");
    }
    const double min_active = trim_head_s + trim_tail_s + 2.0 * (1024.0 / sample_rate_hz) * 2.0;
    if (!(layer_active_s > min_active)) {
        raise(ErrorKind::Config, "layer_active_s too short to leave windows after trimming");
    }
}

ConditionSignature default_signature(fusion::Condition condition) {
    ConditionSignature s;
    switch (condition) {
        case fusion::Condition::NoHole:
            s.burst_rate_hz = 150.0;
            s.burst_amplitude_scale = 2.5;
            s.slow_modulation_std = 0.16;
            s.melt_ellipse_eccentricity_mean = 0.62;
            s.melt_radius_std_px = 1.3;
            break;
        case fusion::Condition::Hole3mm:
            s.burst_rate_hz = 450.0;
            s.burst_amplitude_scale = 2.5;
            s.slow_modulation_std = 0.08;
            s.melt_ellipse_eccentricity_mean = 0.51;
            s.melt_radius_std_px = 0.7;
            break;
        case fusion::Condition::Hole5mm:
            s.burst_rate_hz = 300.0;
            s.burst_amplitude_scale = 2.5;
            s.slow_modulation_std = 0.22;
            s.melt_ellipse_eccentricity_mean = 0.57;
            s.melt_radius_std_px = 1.0;
            break;
    }
    s.melt_ellipse_eccentricity_std = 0.03;
    s.melt_radius_mean_px = 12.0;
    s.specimen_spread = 0.15;
    return s;
}

std::string specimen_id(const SpecimenKey& key) {
    const char* prefix = "nohole";
    if (key.condition == fusion::Condition::Hole3mm) prefix = "hole3mm";
    if (key.condition == fusion::Condition::Hole5mm) prefix = "hole5mm";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%02d", prefix, key.index);
    return buf;
}

std::uint64_t specimen_seed(std::uint64_t dataset_seed, const SpecimenKey& key) {
    return derive_key(dataset_seed,
                      {static_cast<std::uint64_t>(fusion::code(key.condition)), static_cast<std::uint64_t>(key.index)});
}

std::vector<SpecimenKey> dataset_keys(const SynthProfile& profile) {
    std::vector<SpecimenKey> keys;
    for (fusion::Condition c : fusion::kAllConditions) {
        for (int i = 0; i < profile.specimens_per_condition; ++i) keys.push_back({c, i});
    }
    return keys;
}

GroundTruth ground_truth(const SynthProfile& profile, const SpecimenKey& key) {
    profile.validate();
    GroundTruth truth;
    truth.specimen_id = specimen_id(key);
    truth.condition = key.condition;
    truth.specimen_seed = specimen_seed(profile.seed, key);
    const double fs = profile.sample_rate_hz;
    for (int l = 0; l < profile.layers; ++l) {
        LayerTruth lt;
        lt.layer_index = l + 1;
        lt.start_s = l * (profile.layer_active_s + profile.dwell_s);
        lt.end_s = lt.start_s + profile.layer_active_s;
        lt.start_sample = static_cast<std::size_t>(std::llround(lt.start_s * fs));
        lt.end_sample = static_cast<std::size_t>(std::llround(lt.end_s * fs));
        lt.first_frame = static_cast<std::size_t>(std::ceil(lt.start_s * profile.fps - 1e-9));
        lt.end_frame = static_cast<std::size_t>(std::ceil(lt.end_s * profile.fps - 1e-9));
        const double kept = profile.layer_active_s - profile.trim_head_s - profile.trim_tail_s;
        lt.expected_windows = static_cast<std::size_t>(std::floor(kept * fs / 1024.0));
        truth.layers.push_back(lt);
    }
    return truth;
}

signal::AeRecording generate_ae(const SynthProfile& profile, const SpecimenKey& key,
                                const GeneratorSettings& settings) {
    const GroundTruth truth = ground_truth(profile, key);
    const ConditionSignature sig = specimen_signature(settings.signature(key.condition), truth.specimen_seed);
    const EmissionLevels& lv = settings.levels;
    const double fs = profile.sample_rate_hz;

    signal::AeRecording rec;
    rec.specimen_id = truth.specimen_id;
    rec.sample_rate_hz = fs;
    rec.samples.assign(profile.sample_count(), 0.0f);

    std::size_t cursor = 0;
    for (std::size_t l = 0; l < truth.layers.size(); ++l) {
        const LayerTruth& lt = truth.layers[l];
        if (lt.start_sample > cursor) {
            CounterRng rng(derive_key(truth.specimen_seed, {kStreamAeDwell, l}));
            for (std::size_t i = cursor; i < lt.start_sample; ++i) {
                rec.samples[i] = static_cast<float>(lv.dwell_rms_v * rng.normal());
            }
        }

        CounterRng rng(derive_key(truth.specimen_seed, {kStreamAeLayer, l}));
        const std::size_t n = lt.end_sample - lt.start_sample;
        const double gain = (l == 0 ? lv.first_layer_gain : 1.0);
        // First-difference of white noise puts ~99 % of its energy above 100 kHz.
        const double sigma_w = lv.active_rms_v * gain / std::numbers::sqrt2;
        std::vector<double> x(n);
        double prev = sigma_w * rng.normal();
        for (std::size_t i = 0; i < n; ++i) {
            const double w = sigma_w * rng.normal();
            x[i] = w - prev;
            prev = w;
        }

        // Poisson-timed decaying bursts.
        const double tau_samples = sig.burst_decay_s * fs;
        const auto span = static_cast<std::size_t>(kBurstSpan * tau_samples);
        const double decay = std::exp(-1.0 / tau_samples);
        double t = rng.exponential(sig.burst_rate_hz);
        while (sig.burst_rate_hz > 0.0) {
            const auto start = static_cast<std::size_t>(t * fs);
            if (start >= n) break;
            const double amp = sig.burst_amplitude_scale * lv.active_rms_v * gain * std::exp(0.3 * rng.normal());
            const double freq = sig.burst_frequency_hz * (1.0 + 0.05 * rng.normal());
            const double phase = 2.0 * std::numbers::pi * rng.uniform();
            const double w = 2.0 * std::numbers::pi * freq / fs;
            // Rotate a complex phasor instead of calling sin per sample.
            double re = std::cos(phase) * amp, im = std::sin(phase) * amp;
            const double cr = std::cos(w) * decay, ci = std::sin(w) * decay;
            const std::size_t stop = std::min(n, start + span);
            for (std::size_t i = start; i < stop; ++i) {
                x[i] += im;
                const double nr = re * cr - im * ci;
                im = re * ci + im * cr;
                re = nr;
            }
            t += rng.exponential(sig.burst_rate_hz);
        }

        // Log-normal slow envelope from a sum of low-frequency tones.
        double freqs[kModulationTones], phases[kModulationTones];
        for (int k = 0; k < kModulationTones; ++k) {
            freqs[k] = 0.3 + 2.7 * rng.uniform();
            phases[k] = 2.0 * std::numbers::pi * rng.uniform();
        }
        const double tone_amp = std::sqrt(2.0 / kModulationTones);
        auto envelope = [&](std::size_t i) {
            const double ts = static_cast<double>(i) / fs;
            double s = 0.0;
            for (int k = 0; k < kModulationTones; ++k) {
                s += tone_amp * std::sin(2.0 * std::numbers::pi * freqs[k] * ts + phases[k]);
            }
            return std::exp(sig.slow_modulation_std * s);
        };
        double m0 = envelope(0);
        for (std::size_t k0 = 0; k0 < n; k0 += kModulationStep) {
            const double m1 = envelope(k0 + kModulationStep);
            const std::size_t k1 = std::min(n, k0 + kModulationStep);
            for (std::size_t i = k0; i < k1; ++i) {
                const double a = static_cast<double>(i - k0) / kModulationStep;
                rec.samples[lt.start_sample + i] = static_cast<float>(x[i] * (m0 + a * (m1 - m0)));
            }
            m0 = m1;
        }
        cursor = lt.end_sample;
    }
    if (cursor < rec.samples.size()) {
        CounterRng rng(derive_key(truth.specimen_seed, {kStreamAeDwell, truth.layers.size()}));
        for (std::size_t i = cursor; i < rec.samples.size(); ++i) {
            rec.samples[i] = static_cast<float>(lv.dwell_rms_v * rng.normal());
        }
    }
    return rec;
}

vision::FrameStream generate_frames(const SynthProfile& profile, const SpecimenKey& key,
                                    const GeneratorSettings& settings) {
    const GroundTruth truth = ground_truth(profile, key);
    const ConditionSignature sig = specimen_signature(settings.signature(key.condition), truth.specimen_seed);
    const EmissionLevels& lv = settings.levels;
    const int w = profile.frame_width;
    const int h = profile.frame_height;
    const double scale = w / 128.0;

    // Per-layer mean shape; scan direction alternates between layers.
    std::vector<BlobShape> layer_shapes;
    for (std::size_t l = 0; l < truth.layers.size(); ++l) {
        CounterRng rng(derive_key(truth.specimen_seed, {kStreamLayerShape, l}));
        BlobShape s{};
        s.radius_px = sig.melt_radius_mean_px * (1.0 + 0.03 * rng.normal());
        const double e = std::clamp(sig.melt_ellipse_eccentricity_mean + 0.01 * rng.normal(), 0.0, 0.95);
        s.axis_ratio = std::sqrt(1.0 - e * e);
        s.angle = (l % 2 == 0 ? 0.0 : std::numbers::pi / 2.0) + 0.1 * rng.normal();
        layer_shapes.push_back(s);
    }

    vision::FrameStream stream;
    stream.specimen_id = truth.specimen_id;
    stream.fps = profile.fps;
    stream.pixel_size_um = profile.pixel_size_um;
    const std::size_t count = profile.frame_count();
    stream.frames.resize(count);

    for (std::size_t f = 0; f < count; ++f) {
        CounterRng rng(derive_key(truth.specimen_seed, {kStreamFrame, f}));
        vision::Frame& frame = stream.frames[f];
        frame.width = w;
        frame.height = h;
        frame.timestamp_s = static_cast<double>(f) / profile.fps;
        frame.pixel_size_um = profile.pixel_size_um;

        std::vector<double> img(static_cast<std::size_t>(w) * h);
        for (double& v : img) v = lv.background_counts + lv.background_noise_counts * rng.normal();

        int layer = -1;
        for (std::size_t l = 0; l < truth.layers.size(); ++l) {
            if (f >= truth.layers[l].first_frame && f < truth.layers[l].end_frame) layer = static_cast<int>(l);
        }
        if (layer >= 0) {
            const BlobShape& base = layer_shapes[static_cast<std::size_t>(layer)];
            const double radius = std::max(3.0, base.radius_px + sig.melt_radius_std_px * rng.normal()) * scale;
            const double q0 = base.axis_ratio;
            const double e0 = std::sqrt(std::max(0.0, 1.0 - q0 * q0));
            const double e = std::clamp(e0 + sig.melt_ellipse_eccentricity_std * rng.normal(), 0.0, 0.95);
            const double q = std::sqrt(1.0 - e * e);
            const double angle = base.angle + 0.05 * rng.normal();
            const double cx = 0.5 * (w - 1) + scale * rng.normal();
            const double cy = 0.5 * (h - 1) + scale * rng.normal();
            const double su = radius / kContourSigma;
            const double sv = q * su;
            const double ca = std::cos(angle), sa = std::sin(angle);
            const double reach = 4.0 * su;
            const int x0 = std::max(0, static_cast<int>(std::floor(cx - reach)));
            const int x1 = std::min(w - 1, static_cast<int>(std::ceil(cx + reach)));
            const int y0 = std::max(0, static_cast<int>(std::floor(cy - reach)));
            const int y1 = std::min(h - 1, static_cast<int>(std::ceil(cy + reach)));
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const double dx = x - cx, dy = y - cy;
                    const double u = ca * dx + sa * dy;
                    const double v = -sa * dx + ca * dy;
                    img[static_cast<std::size_t>(y) * w + x] +=
                        lv.melt_peak_counts * std::exp(-0.5 * (u * u / (su * su) + v * v / (sv * sv)));
                }
            }
            if (rng.uniform() < lv.spatter_probability) {
                const int dots = 1 + static_cast<int>(rng.index(3));
                for (int d = 0; d < dots; ++d) {
                    const auto px = static_cast<int>(rng.index(static_cast<std::uint64_t>(w)));
                    const auto py = static_cast<int>(rng.index(static_cast<std::uint64_t>(h)));
                    img[static_cast<std::size_t>(py) * w + px] += lv.melt_peak_counts * (0.85 + 0.15 * rng.uniform());
                }
            }
        }

        frame.pixels.resize(img.size());
        for (std::size_t i = 0; i < img.size(); ++i) {
            frame.pixels[i] = static_cast<std::uint16_t>(std::clamp(std::lround(img[i]), 0L, 65535L));
        }
    }
    return stream;
}

Specimen generate_specimen(const SynthProfile& profile, const SpecimenKey& key, const GeneratorSettings& settings) {
    Specimen s;
    s.truth = ground_truth(profile, key);
    s.ae = generate_ae(profile, key, settings);
    s.frames = generate_frames(profile, key, settings);
    return s;
}

}  // namespace dedmon::synth
