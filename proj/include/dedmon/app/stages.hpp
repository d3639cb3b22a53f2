#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "dedmon/app/config.hpp"
#include "dedmon/io/stamp.hpp"

namespace dedmon::app {

/// Inputs shared by every stage. Stages read from `in` and write below
/// `out`; running them all with in == out chains the pipeline.
struct StageContext {
    PipelineConfig config;
    std::filesystem::path in;
    std::filesystem::path out;
    std::size_t jobs = 1;

    io::ArtifactStamp stamp() const;
};

/// out/manifest.json and out/specimens/<id>/{ae.f32, ae.meta.json, frames/}.
void run_synth(const StageContext& ctx);
/// in/manifest.json -> out/features/ae.csv and ae_segments.csv.
void run_ae(const StageContext& ctx);
/// in/manifest.json -> out/features/vision.csv and vision_segments.csv.
void run_vision(const StageContext& ctx);
/// in/features/{ae,vision}.csv -> out/features/fused.csv, the split and the
/// per-feature-set standardized tables under out/fusion/.
void run_fuse(const StageContext& ctx);
/// in/fusion/ -> out/models/: grid search and one model file per seed.
void run_train(const StageContext& ctx);
/// in/models/ and in/fusion/ -> out/eval/<classifier>_<set>.json and
/// summary.txt.
void run_eval(const StageContext& ctx);
/// in/eval/ and in/features/fused.csv -> out/report/*.csv.
void run_report(const StageContext& ctx);
/// Every stage in order, all inside `out`.
void run_pipeline(StageContext ctx);

}  // namespace dedmon::app
