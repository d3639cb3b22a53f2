#include "dedmon/io/frames.hpp"

#include <cstdio>
#include <set>

#include "dedmon/core/error.hpp"
#include "dedmon/io/files.hpp"

namespace dedmon::io {

namespace fs = std::filesystem;

namespace {

/// Reads one whitespace-delimited header token starting at `pos`.
std::string token(const std::string& bytes, std::size_t& pos) {
    while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
    return bytes.substr(start, pos - start);
}

int header_int(const std::string& bytes, std::size_t& pos) {
    const std::string t = token(bytes, pos);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos || t.size() > 9) {
        raise(ErrorKind::CorruptStream, "malformed PGM header field '" + t + "'");
    }
    return std::stoi(t);
}

}  // namespace

std::string encode_pgm(const vision::Frame& frame) {
    std::string out = "P5\n" + std::to_string(frame.width) + " " + std::to_string(frame.height) + "\n65535\n";
    const std::size_t header = out.size();
    out.resize(header + frame.pixels.size() * 2);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        out[header + 2 * i] = static_cast<char>(frame.pixels[i] >> 8);
        out[header + 2 * i + 1] = static_cast<char>(frame.pixels[i] & 0xff);
    }
    return out;
}

vision::Frame decode_pgm(const std::string& bytes) {
    std::size_t pos = 0;
    if (token(bytes, pos) != "P5") raise(ErrorKind::CorruptStream, "not a binary PGM");
    vision::Frame f;
    f.width = header_int(bytes, pos);
    f.height = header_int(bytes, pos);
    const int maxval = header_int(bytes, pos);
    if (maxval != 65535) raise(ErrorKind::CorruptStream, "PGM maxval must be 65535");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        raise(ErrorKind::CorruptStream, "PGM header is not terminated");
    }
    ++pos;
    const std::size_t count = static_cast<std::size_t>(f.width) * static_cast<std::size_t>(f.height);
    if (bytes.size() - pos != 2 * count) raise(ErrorKind::CorruptStream, "PGM payload size does not match header");
    f.pixels.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        f.pixels[i] = static_cast<std::uint16_t>((static_cast<unsigned char>(bytes[pos + 2 * i]) << 8) |
                                                 static_cast<unsigned char>(bytes[pos + 2 * i + 1]));
    }
    return f;
}

std::string frame_file_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%06zu.pgm", index);
    return buf;
}

void write_frame_stream(const fs::path& dir, const vision::FrameStream& stream, const std::optional<ArtifactStamp>& stamp) {
    if (stream.frames.empty()) raise(ErrorKind::InvalidInput, "cannot write an empty frame stream");
    const auto& first = stream.frames.front();
    for (std::size_t i = 0; i < stream.frames.size(); ++i) {
        const auto& f = stream.frames[i];
        if (f.width != first.width || f.height != first.height) {
            raise(ErrorKind::InvalidInput, "frame sizes differ within stream " + stream.specimen_id);
        }
        atomic_write(dir / frame_file_name(i), encode_pgm(f));
    }
    nlohmann::json meta = {{"specimen_id", stream.specimen_id}, {"fps", stream.fps},
                           {"pixel_size_um", stream.pixel_size_um}, {"width", first.width},
                           {"height", first.height}, {"frame_count", stream.frames.size()},
                           {"t0_s", first.timestamp_s}};
    if (stamp) meta["provenance"] = to_json(*stamp);
    atomic_write(dir / "stream.meta.json", dump(meta));
}

vision::FrameStream read_frame_stream(const fs::path& dir, const std::optional<std::string>& expected_crc32) {
    const fs::path meta_path = dir / "stream.meta.json";
    const auto meta = parse_json(read_file(meta_path), meta_path.string());
    vision::FrameStream s;
    int width = 0, height = 0;
    std::size_t count = 0;
    double t0 = 0.0;
    try {
        s.specimen_id = meta.value("specimen_id", std::string());
        s.fps = meta.at("fps").get<double>();
        s.pixel_size_um = meta.at("pixel_size_um").get<double>();
        width = meta.at("width").get<int>();
        height = meta.at("height").get<int>();
        count = meta.at("frame_count").get<std::size_t>();
        t0 = meta.at("t0_s").get<double>();
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::CorruptStream, meta_path.string() + ": " + e.what());
    }
    if (!(s.fps > 0.0)) raise(ErrorKind::CorruptStream, meta_path.string() + ": fps must be positive");

    std::set<std::string> on_disk;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("frame_", 0) == 0 && entry.path().extension() == ".pgm") on_disk.insert(name);
    }
    s.frames.resize(count);
    std::uint32_t crc = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::string name = frame_file_name(i);
        if (!on_disk.erase(name)) raise(ErrorKind::CorruptStream, dir.string() + ": missing " + name);
        const std::string bytes = read_file(dir / name);
        crc = crc32(bytes, crc);
        vision::Frame f = decode_pgm(bytes);
        if (f.width != width || f.height != height) {
            raise(ErrorKind::CorruptStream, dir.string() + "/" + name + " does not match the stream header size");
        }
        f.timestamp_s = t0 + static_cast<double>(i) / s.fps;
        f.pixel_size_um = s.pixel_size_um;
        s.frames[i] = std::move(f);
    }
    if (!on_disk.empty()) raise(ErrorKind::CorruptStream, dir.string() + ": unexpected " + *on_disk.begin());
    if (expected_crc32 && crc32_hex(crc) != *expected_crc32) {
        raise(ErrorKind::CorruptFile, dir.string() + " fails its checksum");
    }
    return s;
}

std::uint32_t frame_stream_crc(const fs::path& dir) {
    const fs::path meta_path = dir / "stream.meta.json";
    const auto meta = parse_json(read_file(meta_path), meta_path.string());
    const auto count = meta.value("frame_count", std::size_t{0});
    std::uint32_t crc = 0;
    for (std::size_t i = 0; i < count; ++i) crc = crc32_file(dir / frame_file_name(i), crc);
    return crc;
}

}  // namespace dedmon::io
