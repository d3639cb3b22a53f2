#include <algorithm>
#include <cmath>

#include "dedmon/vision/melt_pool.hpp"

namespace dedmon::vision {
namespace {

// Separable square min/max filter. Pixels outside the frame are ignored, so
// the border neither erodes nor dilates the mask.
Mask square_filter(const Mask& mask, int radius, bool take_max) {
    if (radius <= 0) return mask;
    const int w = mask.width, h = mask.height;
    Mask rows(w, h), out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int lo = std::max(0, x - radius), hi = std::min(w - 1, x + radius);
            std::uint8_t v = take_max ? 0 : 1;
            for (int xx = lo; xx <= hi; ++xx) v = take_max ? std::max(v, mask.at(xx, y)) : std::min(v, mask.at(xx, y));
            rows.at(x, y) = v;
        }
    }
    for (int y = 0; y < h; ++y) {
        const int lo = std::max(0, y - radius), hi = std::min(h - 1, y + radius);
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = take_max ? 0 : 1;
            for (int yy = lo; yy <= hi; ++yy) v = take_max ? std::max(v, rows.at(x, yy)) : std::min(v, rows.at(x, yy));
            out.at(x, y) = v;
        }
    }
    return out;
}

}  // namespace

Mask erode(const Mask& mask, int radius) { return square_filter(mask, radius, false); }
Mask dilate(const Mask& mask, int radius) { return square_filter(mask, radius, true); }

Mask largest_component(const Mask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> label(mask.bits.size(), -1);
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!mask.bits[idx] || label[idx] >= 0) continue;
            const int id = static_cast<int>(sizes.size());
            std::size_t size = 0;
            queue.clear();
            queue.push_back(idx);
            label[idx] = id;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const std::size_t cur = queue[head];
                ++size;
                const int cx = static_cast<int>(cur % w), cy = static_cast<int>(cur / w);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                        if (mask.bits[nidx] && label[nidx] < 0) {
                            label[nidx] = id;
                            queue.push_back(nidx);
                        }
                    }
                }
            }
            sizes.push_back(size);
        }
    }
    Mask out(w, h);
    if (sizes.empty()) return out;
    // First component in raster order wins ties.
    const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (std::size_t i = 0; i < label.size(); ++i) out.bits[i] = label[i] == best;
    return out;
}

Mask segment_melt_pool(const Frame& frame, const VisionSegmentationConfig& config) {
    Mask mask(frame.width, frame.height);
    const std::uint16_t peak = frame.max_intensity();
    if (peak == 0) return mask;
    const double threshold = config.threshold_fraction * static_cast<double>(peak);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) mask.bits[i] = static_cast<double>(frame.pixels[i]) >= threshold;
    const int r = config.morph_radius_px;
    const Mask opened = dilate(erode(mask, r), r);
    const Mask closed = erode(dilate(opened, r), r);
    return largest_component(closed);
}

}  // namespace dedmon::vision
