#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "dedmon/app/extract.hpp"
#include "dedmon/fusion/align.hpp"
#include "dedmon/ml/ablation.hpp"
#include "dedmon/synth/generator.hpp"
#include "json.hpp"

namespace dedmon::app {

/// Every tunable of a run. Defaults follow the generator profile.
struct PipelineConfig {
    std::uint64_t seed = 42;
    synth::SynthProfile profile;
    synth::GeneratorSettings generator;
    ExtractionConfig extraction;
    fusion::AlignmentConfig alignment;
    ml::AblationConfig ablation;

    /// Throws Config on any out-of-range value.
    void validate() const;
};

PipelineConfig default_config(synth::ProfileName profile);

nlohmann::json to_json(const PipelineConfig& config);

/// Starts from default_config(profile) (or the file's own `profile` entry)
/// and applies the document. Unknown keys and ill-typed values raise Config.
PipelineConfig config_from_json(const nlohmann::json& doc, synth::ProfileName profile);

/// Reads a config file; `profile` and `seed` overrides from the command line
/// win over the file.
PipelineConfig load_config(const std::optional<std::filesystem::path>& path, std::optional<synth::ProfileName> profile,
                           std::optional<std::uint64_t> seed);

/// Hash of the canonical JSON form.
std::string config_hash(const PipelineConfig& config);

}  // namespace dedmon::app
