#include "dedmon/vision/frame.hpp"

#include <algorithm>

#include "dedmon/core/error.hpp"

namespace dedmon::vision {

double Frame::mean_intensity() const {
    if (pixels.empty()) return 0.0;
    std::uint64_t sum = 0;
    for (auto p : pixels) sum += p;
    return static_cast<double>(sum) / static_cast<double>(pixels.size());
}

std::uint16_t Frame::max_intensity() const {
    return pixels.empty() ? 0 : *std::max_element(pixels.begin(), pixels.end());
}

std::size_t Mask::count() const { return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1)); }

void validate(const FrameStream& stream) {
    for (std::size_t i = 0; i < stream.frames.size(); ++i) {
        const Frame& f = stream.frames[i];
        if (f.width <= 0 || f.height <= 0 ||
            f.pixels.size() != static_cast<std::size_t>(f.width) * static_cast<std::size_t>(f.height)) {
            raise(ErrorKind::InvalidInput, "frame " + std::to_string(i) + " has inconsistent dimensions");
        }
        if (i > 0 && !(f.timestamp_s > stream.frames[i - 1].timestamp_s)) {
            raise(ErrorKind::InvalidInput, "frame timestamps must increase strictly (frame " + std::to_string(i) + ")");
        }
    }
}

}  // namespace dedmon::vision
