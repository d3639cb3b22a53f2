#include "dedmon/io/waveform.hpp"

#include <bit>
#include <cstring>

#include "dedmon/core/error.hpp"
#include "dedmon/io/files.hpp"

namespace dedmon::io {

namespace fs = std::filesystem;

static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559, "float32 samples are required");

fs::path waveform_sidecar(const fs::path& samples) {
    fs::path p = samples;
    p.replace_extension(".meta.json");
    return p;
}

void write_waveform(const fs::path& samples, const signal::AeRecording& recording,
                    const std::optional<ArtifactStamp>& stamp) {
    std::vector<std::uint8_t> bytes(recording.samples.size() * 4);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(bytes.data(), recording.samples.data(), bytes.size());
    } else {
        for (std::size_t i = 0; i < recording.samples.size(); ++i) {
            const auto u = std::bit_cast<std::uint32_t>(recording.samples[i]);
            for (int b = 0; b < 4; ++b) bytes[4 * i + static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(u >> (8 * b));
        }
    }
    nlohmann::json meta = {{"sample_rate_hz", recording.sample_rate_hz},
                           {"specimen_id", recording.specimen_id},
                           {"start_time_s", recording.start_time_s},
                           {"sample_count", recording.samples.size()}};
    if (stamp) meta["provenance"] = to_json(*stamp);
    atomic_write(samples, bytes);
    atomic_write(waveform_sidecar(samples), dump(meta));
}

signal::AeRecording read_waveform(const fs::path& samples, const std::optional<std::string>& expected_crc32) {
    const fs::path sidecar = waveform_sidecar(samples);
    const auto meta = parse_json(read_file(sidecar), sidecar.string());
    signal::AeRecording rec;
    std::size_t count = 0;
    try {
        rec.sample_rate_hz = meta.at("sample_rate_hz").get<double>();
        rec.specimen_id = meta.at("specimen_id").get<std::string>();
        rec.start_time_s = meta.at("start_time_s").get<double>();
        count = meta.at("sample_count").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::CorruptFile, sidecar.string() + ": " + e.what());
    }
    const std::string bytes = read_file(samples);
    if (bytes.size() != 4 * count) {
        raise(ErrorKind::CorruptFile, samples.string() + " holds " + std::to_string(bytes.size()) + " bytes, sidecar declares " +
                                          std::to_string(count) + " samples");
    }
    if (expected_crc32 && crc32_hex(crc32(bytes)) != *expected_crc32) {
        raise(ErrorKind::CorruptFile, samples.string() + " fails its checksum");
    }
    rec.samples.resize(count);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(rec.samples.data(), bytes.data(), bytes.size());
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            std::uint32_t u = 0;
            for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * i + static_cast<std::size_t>(b)])) << (8 * b);
            rec.samples[i] = std::bit_cast<float>(u);
        }
    }
    return rec;
}

}  // namespace dedmon::io
