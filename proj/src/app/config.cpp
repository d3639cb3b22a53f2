#include "dedmon/app/config.hpp"

#include <set>

#include "dedmon/core/error.hpp"
#include "dedmon/io/files.hpp"
#include "dedmon/io/stamp.hpp"

namespace dedmon::app {

namespace {

using nlohmann::json;

/// Walks a JSON object and copies known keys into fields; whatever is left
/// over at the end is an unknown key.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) raise(ErrorKind::Config, path_ + " must be an object");
    }

    template <class T>
    void operator()(const char* key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            if constexpr (std::is_same_v<T, bool>) {
                out = j_.at(key).get<bool>();
            } else if constexpr (std::is_integral_v<T>) {
                const auto& v = j_.at(key);
                if (!v.is_number_integer()) raise(ErrorKind::Config, path_ + "." + key + " must be an integer");
                if (v.is_number_unsigned() || v.get<long long>() >= 0 || std::is_signed_v<T>) {
                    out = v.get<T>();
                } else {
                    raise(ErrorKind::Config, path_ + "." + key + " must be non-negative");
                }
            } else {
                out = j_.at(key).get<T>();
            }
        } catch (const json::exception& e) {
            raise(ErrorKind::Config, path_ + "." + key + ": " + e.what());
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    std::string path(const char* key) const { return path_ + "." + key; }

    void finish() const {
        for (const auto& [k, v] : j_.items()) {
            if (!seen_.count(k)) raise(ErrorKind::Config, "unknown config key " + path_ + "." + k);
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

class Writer {
public:
    template <class T>
    void operator()(const char* key, const T& value) {
        j[key] = value;
    }
    json j = json::object();
};

template <class V>
void visit(synth::SynthProfile& p, V&& v) {
    v("sample_rate_hz", p.sample_rate_hz);
    v("fps", p.fps);
    v("layers", p.layers);
    v("layer_active_s", p.layer_active_s);
    v("dwell_s", p.dwell_s);
    v("trim_head_s", p.trim_head_s);
    v("trim_tail_s", p.trim_tail_s);
    v("min_quiet_duration_s", p.min_quiet_duration_s);
    v("frame_width", p.frame_width);
    v("frame_height", p.frame_height);
    v("pixel_size_um", p.pixel_size_um);
    v("specimens_per_condition", p.specimens_per_condition);
}

template <class V>
void visit(synth::EmissionLevels& l, V&& v) {
    v("active_rms_v", l.active_rms_v);
    v("dwell_rms_v", l.dwell_rms_v);
    v("first_layer_gain", l.first_layer_gain);
    v("background_counts", l.background_counts);
    v("background_noise_counts", l.background_noise_counts);
    v("melt_peak_counts", l.melt_peak_counts);
    v("spatter_probability", l.spatter_probability);
}

template <class V>
void visit(synth::ConditionSignature& s, V&& v) {
    v("burst_rate_hz", s.burst_rate_hz);
    v("burst_amplitude_scale", s.burst_amplitude_scale);
    v("burst_decay_s", s.burst_decay_s);
    v("burst_frequency_hz", s.burst_frequency_hz);
    v("slow_modulation_std", s.slow_modulation_std);
    v("melt_ellipse_eccentricity_mean", s.melt_ellipse_eccentricity_mean);
    v("melt_ellipse_eccentricity_std", s.melt_ellipse_eccentricity_std);
    v("melt_radius_mean_px", s.melt_radius_mean_px);
    v("melt_radius_std_px", s.melt_radius_std_px);
    v("specimen_spread", s.specimen_spread);
}

template <class V>
void visit(ae::AeSegmentationConfig& c, V&& v) {
    v("quiet_threshold_db", c.quiet_threshold_db);
    v("min_quiet_duration_s", c.min_quiet_duration_s);
    v("envelope_window_s", c.envelope_window_s);
    v("trim_head_s", c.trim_head_s);
    v("trim_tail_s", c.trim_tail_s);
    v("reference_volts", c.reference_volts);
}

template <class V>
void visit(ae::AeFeatureConfig& c, V&& v) {
    v("window_samples", c.window_samples);
    v("highpass_cutoff_hz", c.highpass_cutoff_hz);
    v("highpass_order", c.highpass_order);
    v("split_frequency_hz", c.spectral.split_frequency_hz);
    v("band_low_hz", c.spectral.band_low_hz);
    v("band_high_hz", c.spectral.band_high_hz);
    v("band_span_hz", c.spectral.band_span_hz);
    v("rolloff_fraction", c.spectral.rolloff_fraction);
    v("high_band_floor", c.spectral.high_band_floor);
}

template <class V>
void visit(vision::VisionSegmentationConfig& c, V&& v) {
    v("quiet_fraction", c.quiet_fraction);
    v("min_quiet_duration_s", c.min_quiet_duration_s);
    v("threshold_fraction", c.threshold_fraction);
    v("trim_head_s", c.trim_head_s);
    v("trim_tail_s", c.trim_tail_s);
    v("morph_radius_px", c.morph_radius_px);
    v("min_active_intensity", c.min_active_intensity);
    v("max_area_fraction", c.max_area_fraction);
}

template <class V>
void visit_fusion(PipelineConfig& c, V&& v) {
    v("expected_layers", c.alignment.expected_layers);
    v("first_kept_layer", c.alignment.first_kept_layer);
    v("train_fraction", c.ablation.train_fraction);
    v("paper_order", c.ablation.paper_order);
    auto& p = c.ablation.preprocess;
    v("top_k_ae", p.top_k_ae);
    v("top_k_vision", p.top_k_vision);
    v("smote_k", p.smote_k);
    v("smote_target_multiplier", p.smote_target_multiplier);
    v("noise_fraction", p.noise_fraction);
    v("noise_copies", p.noise_copies);
    v("augment", p.augment);
}

template <class V>
void visit_ml(ml::AblationConfig& c, V&& v) {
    v("cv_folds", c.cv_folds);
    v("mlp_seeds", c.mlp_seeds);
}

template <class T>
json write(T& value) {
    Writer w;
    visit(value, w);
    return w.j;
}

template <class T>
void read(const json* j, const std::string& path, T& value) {
    if (!j) return;
    Reader r(*j, path);
    visit(value, r);
    r.finish();
}

}  // namespace

void PipelineConfig::validate() const {
    profile.validate();
    for (const auto& s : generator.signatures) {
        if (!(s.burst_rate_hz > 0.0 && s.burst_amplitude_scale > 0.0 && s.burst_decay_s > 0.0 &&
              s.burst_frequency_hz > 0.0 && s.burst_frequency_hz < profile.sample_rate_hz / 2.0 &&
              s.slow_modulation_std > 0.0 && s.melt_ellipse_eccentricity_mean > 0.0 &&
              s.melt_ellipse_eccentricity_mean < 1.0 && s.melt_ellipse_eccentricity_std > 0.0 &&
              s.melt_radius_mean_px > 0.0 && s.melt_radius_std_px > 0.0 && s.specimen_spread > 0.0)) {
            raise(ErrorKind::Config, "condition signatures must be positive (eccentricity below 1, bursts below Nyquist)");
        }
    }
    const auto& lv = generator.levels;
    if (!(lv.active_rms_v > 0.0 && lv.dwell_rms_v > 0.0 && lv.first_layer_gain > 0.0 && lv.background_counts >= 0.0 &&
          lv.background_noise_counts >= 0.0 && lv.melt_peak_counts > 0.0 && lv.spatter_probability >= 0.0 &&
          lv.spatter_probability <= 1.0)) {
        raise(ErrorKind::Config, "emission levels out of range");
    }
    extraction.ae_segmentation.validate();
    extraction.ae_features.validate(profile.sample_rate_hz);
    extraction.vision_segmentation.validate();
    if (alignment.expected_layers < 1 || alignment.first_kept_layer < 1 ||
        alignment.first_kept_layer > alignment.expected_layers) {
        raise(ErrorKind::Config, "alignment layers out of range");
    }
    if (!(ablation.train_fraction > 0.0 && ablation.train_fraction < 1.0)) {
        raise(ErrorKind::Config, "train_fraction must be in (0, 1)");
    }
    ablation.preprocess.validate();
    if (ablation.cv_folds < 2) raise(ErrorKind::Config, "cv_folds must be at least 2");
    if (ablation.mlp_seeds < 1) raise(ErrorKind::Config, "mlp_seeds must be positive");
    for (const auto& [kind, grid] : ablation.grids) ml::validate_grid(kind, grid);
}

PipelineConfig default_config(synth::ProfileName profile) {
    PipelineConfig c;
    c.profile = profile == synth::ProfileName::PaperScale ? synth::SynthProfile::paper_scale() : synth::SynthProfile::desk();
    c.profile.seed = c.seed;
    c.extraction = extraction_for_profile(c.profile);
    c.ablation.grids = ml::default_grids();
    return c;
}

nlohmann::json to_json(const PipelineConfig& config) {
    PipelineConfig c = config;
    json synth = write(c.profile);
    synth["profile"] = synth::to_string(c.profile.name);
    synth["levels"] = write(c.generator.levels);
    json sigs = json::object();
    for (fusion::Condition cond : fusion::kAllConditions) {
        sigs[fusion::to_string(cond)] = write(c.generator.signatures[static_cast<std::size_t>(fusion::code(cond))]);
    }
    synth["signatures"] = sigs;

    Writer fusion_w;
    visit_fusion(c, fusion_w);
    Writer ml_w;
    visit_ml(c.ablation, ml_w);
    json grids = json::object();
    for (const auto& [kind, grid] : c.ablation.grids) grids[ml::to_string(kind)] = grid;
    ml_w.j["grids"] = grids;

    return {{"seed", c.seed},
            {"synth", synth},
            {"ae", {{"segmentation", write(c.extraction.ae_segmentation)}, {"features", write(c.extraction.ae_features)}}},
            {"vision", write(c.extraction.vision_segmentation)},
            {"fusion", fusion_w.j},
            {"ml", ml_w.j}};
}

PipelineConfig config_from_json(const nlohmann::json& doc, synth::ProfileName profile) {
    Reader top(doc, "config");
    if (const json* s = doc.contains("synth") ? &doc.at("synth") : nullptr; s && s->contains("profile")) {
        try {
            profile = synth::parse_profile(s->at("profile").get<std::string>());
        } catch (const json::exception& e) {
            raise(ErrorKind::Config, std::string("config.synth.profile: ") + e.what());
        }
    }
    PipelineConfig c = default_config(profile);
    top("seed", c.seed);
    if (const json* s = top.child("synth")) {
        Reader r(*s, "config.synth");
        std::string name = synth::to_string(c.profile.name);
        r("profile", name);
        visit(c.profile, r);
        read(r.child("levels"), r.path("levels"), c.generator.levels);
        if (const json* sigs = r.child("signatures")) {
            Reader sr(*sigs, r.path("signatures"));
            for (fusion::Condition cond : fusion::kAllConditions) {
                read(sr.child(fusion::to_string(cond)), sr.path(fusion::to_string(cond)),
                     c.generator.signatures[static_cast<std::size_t>(fusion::code(cond))]);
            }
            sr.finish();
        }
        r.finish();
        // Segmentation defaults track the (possibly edited) profile.
        c.extraction = extraction_for_profile(c.profile);
    }
    if (const json* a = top.child("ae")) {
        Reader r(*a, "config.ae");
        read(r.child("segmentation"), r.path("segmentation"), c.extraction.ae_segmentation);
        read(r.child("features"), r.path("features"), c.extraction.ae_features);
        r.finish();
    }
    read(top.child("vision"), "config.vision", c.extraction.vision_segmentation);
    if (const json* f = top.child("fusion")) {
        Reader r(*f, "config.fusion");
        visit_fusion(c, r);
        r.finish();
    }
    if (const json* m = top.child("ml")) {
        Reader r(*m, "config.ml");
        visit_ml(c.ablation, r);
        if (const json* g = r.child("grids")) {
            if (!g->is_object()) raise(ErrorKind::Config, "config.ml.grids must be an object");
            c.ablation.grids.clear();
            for (const auto& [kind_name, grid] : g->items()) {
                const ml::ModelKind kind = ml::parse_model_kind(kind_name);
                try {
                    c.ablation.grids[kind] = grid.get<ml::Grid>();
                } catch (const json::exception& e) {
                    raise(ErrorKind::Config, "config.ml.grids." + kind_name + ": " + e.what());
                }
            }
        }
        r.finish();
    }
    top.finish();
    c.profile.seed = c.seed;
    return c;
}

PipelineConfig load_config(const std::optional<std::filesystem::path>& path, std::optional<synth::ProfileName> profile,
                           std::optional<std::uint64_t> seed) {
    PipelineConfig c = default_config(profile.value_or(synth::ProfileName::Desk));
    if (path) {
        json doc;
        try {
            doc = io::parse_json(io::read_file(*path), path->string());
        } catch (const Error& e) {
            raise(ErrorKind::Config, e.what());
        }
        c = config_from_json(doc, profile.value_or(synth::ProfileName::Desk));
        if (profile && c.profile.name != *profile) {
            // An explicit --profile replaces the file's profile block.
            json edited = doc;
            if (edited.contains("synth")) edited["synth"]["profile"] = synth::to_string(*profile);
            c = config_from_json(edited, *profile);
        }
    }
    if (seed) {
        c.seed = *seed;
        c.profile.seed = *seed;
    }
    c.validate();
    return c;
}

std::string config_hash(const PipelineConfig& config) { return io::hash_json(to_json(config)); }

}  // namespace dedmon::app
