#include "dedmon/io/files.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <system_error>

#include "dedmon/core/error.hpp"

namespace dedmon::io {

namespace fs = std::filesystem;

void atomic_write(const fs::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path staging = path;
    staging += ".partial";
    {
        std::ofstream out(staging, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorKind::Io, "cannot write " + staging.string());
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) raise(ErrorKind::Io, "short write to " + staging.string());
    }
    std::error_code ec;
    fs::rename(staging, path, ec);
    if (ec) raise(ErrorKind::Io, "cannot move " + staging.string() + " into place: " + ec.message());
}

void atomic_write(const fs::path& path, std::string_view text) {
    atomic_write(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::CorruptFile, "cannot open " + path.string());
    std::string data;
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    in.seekg(0, std::ios::beg);
    data.resize(static_cast<std::size_t>(size));
    in.read(data.data(), size);
    if (!in) raise(ErrorKind::CorruptFile, "cannot read " + path.string());
    return data;
}

std::uint32_t crc32(std::span<const std::uint8_t> bytes, std::uint32_t running) {
    uLong crc = running;
    std::size_t done = 0;
    // zlib takes a uInt length; feed large buffers in chunks.
    while (done < bytes.size()) {
        const std::size_t chunk = std::min<std::size_t>(bytes.size() - done, 1u << 30);
        crc = ::crc32(crc, bytes.data() + done, static_cast<uInt>(chunk));
        done += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

std::uint32_t crc32(std::string_view bytes, std::uint32_t running) {
    return crc32(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()), running);
}

std::uint32_t crc32_file(const fs::path& path, std::uint32_t running) { return crc32(read_file(path), running); }

std::string crc32_hex(std::uint32_t value) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", value);
    return buf;
}

}  // namespace dedmon::io
