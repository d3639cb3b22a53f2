#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace dedmon::io {

/// Writes to a sibling staging file, then renames it over `path`, so readers
/// never observe a partial file. Parent directories are created.
void atomic_write(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void atomic_write(const std::filesystem::path& path, std::string_view text);

/// Whole file contents. Throws CorruptFile when it cannot be read.
std::string read_file(const std::filesystem::path& path);

/// zlib CRC-32.
std::uint32_t crc32(std::span<const std::uint8_t> bytes, std::uint32_t running = 0);
std::uint32_t crc32(std::string_view bytes, std::uint32_t running = 0);
std::uint32_t crc32_file(const std::filesystem::path& path, std::uint32_t running = 0);
std::string crc32_hex(std::uint32_t value);

}  // namespace dedmon::io
