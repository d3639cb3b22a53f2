#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dedmon/fusion/table.hpp"
#include "dedmon/io/stamp.hpp"
#include "dedmon/synth/generator.hpp"

namespace dedmon::io {

inline constexpr int kManifestSchemaVersion = 1;

struct ManifestEntry {
    std::string id;
    fusion::Condition condition = fusion::Condition::NoHole;
    std::string ae_file;     // relative to the manifest directory
    std::string frames_dir;  // relative to the manifest directory
    std::optional<synth::GroundTruth> ground_truth;
    std::string ae_crc32;
    std::string frames_crc32;
};

struct DatasetManifest {
    int schema_version = kManifestSchemaVersion;
    nlohmann::json profile;
    std::uint64_t seed = 0;
    std::vector<ManifestEntry> specimens;
    ArtifactStamp stamp;
};

nlohmann::json to_json(const synth::GroundTruth& truth);
synth::GroundTruth ground_truth_from_json(const nlohmann::json& j);
nlohmann::json to_json(const synth::SynthProfile& profile);

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

/// Parses and checks that every referenced file exists (CorruptFile
/// otherwise). With `verify_checksums` every file is also re-hashed; stages
/// that load the data anyway verify while reading instead.
DatasetManifest read_manifest(const std::filesystem::path& path, bool verify_checksums = false);

}  // namespace dedmon::io
