#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dedmon::vision {

struct Frame {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> pixels;  // row-major
    double timestamp_s = 0.0;
    double pixel_size_um = 4.5;

    std::uint16_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double mean_intensity() const;
    std::uint16_t max_intensity() const;
};

struct FrameStream {
    std::string specimen_id;
    double fps = 30.0;
    double pixel_size_um = 4.5;
    std::vector<Frame> frames;
};

/// Binary image; 1 = foreground.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    Mask() = default;
    Mask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    std::uint8_t at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return bits[static_cast<std::size_t>(y) * width + x]; }
    std::size_t count() const;

    bool operator==(const Mask&) const = default;
};

/// Throws InvalidInput on size mismatches or non-increasing timestamps.
void validate(const FrameStream& stream);

}  // namespace dedmon::vision
