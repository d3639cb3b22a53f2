#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dedmon/io/stamp.hpp"
#include "dedmon/signal/recording.hpp"

namespace dedmon::io {

/// `<stem>.meta.json` next to the sample file.
std::filesystem::path waveform_sidecar(const std::filesystem::path& samples);

/// Little-endian float32 samples plus the JSON sidecar
/// {sample_rate_hz, specimen_id, start_time_s, sample_count}.
void write_waveform(const std::filesystem::path& samples, const signal::AeRecording& recording,
                    const std::optional<ArtifactStamp>& stamp = std::nullopt);

/// Throws CorruptFile when the byte length disagrees with the sidecar or the
/// sample bytes miss `expected_crc32` (hex) when given.
signal::AeRecording read_waveform(const std::filesystem::path& samples,
                                  const std::optional<std::string>& expected_crc32 = std::nullopt);

}  // namespace dedmon::io
