#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "dedmon/io/stamp.hpp"
#include "dedmon/vision/frame.hpp"

namespace dedmon::io {

/// Binary 16-bit PGM: `P5\n<w> <h>\n65535\n` then big-endian pixels.
std::string encode_pgm(const vision::Frame& frame);
/// Throws CorruptStream on a malformed header or payload size.
vision::Frame decode_pgm(const std::string& bytes);

std::string frame_file_name(std::size_t index);

/// `frame_000000.pgm`, ... plus `stream.meta.json`
/// {fps, pixel_size_um, width, height, frame_count, t0_s}.
void write_frame_stream(const std::filesystem::path& dir, const vision::FrameStream& stream,
                        const std::optional<ArtifactStamp>& stamp = std::nullopt);

/// Timestamps are t0 + i / fps. Throws CorruptStream for missing, extra or
/// mis-sized frames, and CorruptFile when the frame bytes miss
/// `expected_crc32` (hex) when given.
vision::FrameStream read_frame_stream(const std::filesystem::path& dir,
                                      const std::optional<std::string>& expected_crc32 = std::nullopt);

/// CRC-32 over the frame files' bytes in index order.
std::uint32_t frame_stream_crc(const std::filesystem::path& dir);

}  // namespace dedmon::io
