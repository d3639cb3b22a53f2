#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dedmon/fusion/table.hpp"
#include "dedmon/signal/recording.hpp"
#include "dedmon/vision/frame.hpp"

namespace dedmon::synth {

enum class ProfileName { PaperScale, Desk };
const char* to_string(ProfileName p);
ProfileName parse_profile(const std::string& text);

struct SynthProfile {
    ProfileName name = ProfileName::Desk;
    double sample_rate_hz = 500000.0;
    double fps = 30.0;
    int layers = 5;
    double layer_active_s = 6.0;
    double dwell_s = 1.5;
    double trim_head_s = 1.0;
    double trim_tail_s = 0.5;
    double min_quiet_duration_s = 1.2;
    int frame_width = 128;
    int frame_height = 128;
    double pixel_size_um = 4.5;
    int specimens_per_condition = 20;
    std::uint64_t seed = 42;

    static SynthProfile desk();
    static SynthProfile paper_scale();

    double duration_s() const { return layers * layer_active_s + (layers - 1) * dwell_s; }
    std::size_t sample_count() const;
    std::size_t frame_count() const;

    /// Throws Config when segmentation would be unsolvable by construction.
    void validate() const;
};

/// Per-condition knobs. Acoustic values are relative to the base noise
/// level; vision values are in pixels of a 128 px frame.
struct ConditionSignature {
    double burst_rate_hz = 0.0;
    double burst_amplitude_scale = 0.0;
    double burst_decay_s = 1e-4;
    double burst_frequency_hz = 200e3;
    double slow_modulation_std = 0.0;
    double melt_ellipse_eccentricity_mean = 0.6;
    double melt_ellipse_eccentricity_std = 0.02;
    double melt_radius_mean_px = 12.0;
    double melt_radius_std_px = 1.0;
    /// Relative spread of every parameter between specimens of one condition.
    double specimen_spread = 0.1;
};

ConditionSignature default_signature(fusion::Condition condition);

/// Signal levels shared by all conditions.
struct EmissionLevels {
    double active_rms_v = 562e-6;  // ~55 dB re 1 uV
    double dwell_rms_v = 10e-6;    // 20 dB
    double first_layer_gain = 1.25;
    double background_counts = 20.0;
    double background_noise_counts = 5.0;
    double melt_peak_counts = 50000.0;
    double spatter_probability = 0.15;  // per active frame
};

struct GeneratorSettings {
    EmissionLevels levels;
    std::array<ConditionSignature, fusion::kConditionCount> signatures{
        default_signature(fusion::Condition::NoHole), default_signature(fusion::Condition::Hole3mm),
        default_signature(fusion::Condition::Hole5mm)};

    const ConditionSignature& signature(fusion::Condition c) const {
        return signatures[static_cast<std::size_t>(fusion::code(c))];
    }
};

struct LayerTruth {
    int layer_index = 0;
    double start_s = 0.0;
    double end_s = 0.0;
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;
    std::size_t first_frame = 0;  // first frame with timestamp in [start, end)
    std::size_t end_frame = 0;
    std::size_t expected_windows = 0;
};

struct GroundTruth {
    std::string specimen_id;
    fusion::Condition condition = fusion::Condition::NoHole;
    std::uint64_t specimen_seed = 0;
    std::vector<LayerTruth> layers;
};

struct Specimen {
    signal::AeRecording ae;
    vision::FrameStream frames;
    GroundTruth truth;
};

struct SpecimenKey {
    fusion::Condition condition = fusion::Condition::NoHole;
    int index = 0;
};

std::string specimen_id(const SpecimenKey& key);
std::uint64_t specimen_seed(std::uint64_t dataset_seed, const SpecimenKey& key);

/// All specimens of a dataset in generation order (conditions outer).
std::vector<SpecimenKey> dataset_keys(const SynthProfile& profile);

GroundTruth ground_truth(const SynthProfile& profile, const SpecimenKey& key);

signal::AeRecording generate_ae(const SynthProfile& profile, const SpecimenKey& key,
                                const GeneratorSettings& settings = {});
vision::FrameStream generate_frames(const SynthProfile& profile, const SpecimenKey& key,
                                    const GeneratorSettings& settings = {});

/// Deterministic in (profile, key): regenerating one specimen alone yields
/// the same bytes as its slot in a full run.
Specimen generate_specimen(const SynthProfile& profile, const SpecimenKey& key,
                           const GeneratorSettings& settings = {});

}  // namespace dedmon::synth
