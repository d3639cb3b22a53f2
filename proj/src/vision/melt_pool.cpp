#include "dedmon/vision/melt_pool.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dedmon/core/error.hpp"
#include "dedmon/vision/geometry.hpp"

namespace dedmon::vision {

std::array<double, kGeometryFieldCount> geometry_values(const MeltPoolGeometry& g) {
    return {g.contour_area_um2, g.circle_radius_um, g.circle_area_um2, g.core2circle_ratio,
            g.convexity,        g.bbox_length_um,   g.bbox_width_um};
}

const std::array<std::string, kGeometryFieldCount>& geometry_field_names() {
    static const std::array<std::string, kGeometryFieldCount> names = {
        "contour_area", "circle_radius", "circle_area", "core2circle_ratio", "convexity", "bbox_length", "bbox_width"};
    return names;
}

const std::vector<std::string>& vision_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (const auto& n : geometry_field_names()) {
            out.push_back(n + "_mean");
            out.push_back(n + "_std");
        }
        out.push_back("frame_count");
        out.push_back("time_span");
        return out;
    }();
    return names;
}

MeltPoolGeometry melt_pool_geometry(const Mask& mask, double pixel_size_um, double max_area_fraction) {
    MeltPoolGeometry g;
    const int w = mask.width, h = mask.height;
    std::vector<Point2> centers;
    std::vector<Point2> corners;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            centers.push_back({x + 0.5, y + 0.5});
            const bool interior = x > 0 && y > 0 && x + 1 < w && y + 1 < h && mask.at(x - 1, y) && mask.at(x + 1, y) &&
                                  mask.at(x, y - 1) && mask.at(x, y + 1);
            if (interior) continue;
            const double fx = x, fy = y;
            corners.push_back({fx, fy});
            corners.push_back({fx + 1.0, fy});
            corners.push_back({fx, fy + 1.0});
            corners.push_back({fx + 1.0, fy + 1.0});
        }
    }
    const std::size_t count = centers.size();
    if (count < 3) return g;
    if (static_cast<double>(count) > max_area_fraction * static_cast<double>(mask.bits.size())) return g;
    if (convex_hull(centers).degenerate) return g;

    const Hull hull = convex_hull(corners);
    const double hull_area = polygon_area(hull.vertices);
    const Circle circle = min_enclosing_circle(hull.vertices);

    // Principal axes of the pixel-centre covariance.
    double mx = 0.0, my = 0.0;
    for (const auto& p : centers) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(count);
    my /= static_cast<double>(count);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : centers) {
        sxx += (p.x - mx) * (p.x - mx);
        syy += (p.y - my) * (p.y - my);
        sxy += (p.x - mx) * (p.y - my);
    }
    const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    const double ux = std::cos(theta), uy = std::sin(theta);
    double u_lo = 1e300, u_hi = -1e300, v_lo = 1e300, v_hi = -1e300;
    for (const auto& p : hull.vertices) {
        const double u = p.x * ux + p.y * uy;
        const double v = -p.x * uy + p.y * ux;
        u_lo = std::min(u_lo, u);
        u_hi = std::max(u_hi, u);
        v_lo = std::min(v_lo, v);
        v_hi = std::max(v_hi, v);
    }
    const double major = u_hi - u_lo, minor = v_hi - v_lo;

    const double px2 = pixel_size_um * pixel_size_um;
    g.contour_area_um2 = static_cast<double>(count) * px2;
    g.circle_radius_um = circle.radius * pixel_size_um;
    g.circle_area_um2 = std::numbers::pi * g.circle_radius_um * g.circle_radius_um;
    g.core2circle_ratio = g.contour_area_um2 / g.circle_area_um2;
    g.convexity = static_cast<double>(count) / hull_area;
    g.bbox_length_um = std::max(major, minor) * pixel_size_um;
    g.bbox_width_um = std::min(major, minor) * pixel_size_um;
    g.valid = true;
    return g;
}

VisionLayerFeatures aggregate_layer_vision(int layer_index, const std::vector<MeltPoolGeometry>& geometries,
                                           const std::vector<double>& timestamps) {
    if (geometries.size() != timestamps.size()) {
        raise(ErrorKind::InvalidInput, "geometry and timestamp counts differ");
    }
    std::vector<std::array<double, kGeometryFieldCount>> rows;
    double first_t = 0.0, last_t = 0.0;
    for (std::size_t i = 0; i < geometries.size(); ++i) {
        if (!geometries[i].valid) continue;
        if (rows.empty()) first_t = timestamps[i];
        last_t = timestamps[i];
        rows.push_back(geometry_values(geometries[i]));
    }
    if (rows.size() < 2) {
        raise(ErrorKind::LayerExtraction, "vision layer " + std::to_string(layer_index) + " has " +
                                              std::to_string(rows.size()) + " valid frames");
    }
    VisionLayerFeatures out;
    out.layer_index = layer_index;
    out.frame_count = rows.size();
    out.time_span_s = last_t - first_t;
    const double n = static_cast<double>(rows.size());
    for (std::size_t j = 0; j < kGeometryFieldCount; ++j) {
        bool constant = true;
        double sum = 0.0;
        for (const auto& r : rows) {
            sum += r[j];
            constant = constant && r[j] == rows.front()[j];
        }
        const double mean = constant ? rows.front()[j] : sum / n;
        double ss = 0.0;
        for (const auto& r : rows) ss += (r[j] - mean) * (r[j] - mean);
        out.values[2 * j] = mean;
        out.values[2 * j + 1] = constant ? 0.0 : std::sqrt(ss / (n - 1.0));
    }
    out.values[2 * kGeometryFieldCount] = static_cast<double>(out.frame_count);
    out.values[2 * kGeometryFieldCount + 1] = out.time_span_s;
    return out;
}

VisionLayerFeatures extract_layer_vision(const FrameStream& stream, const FrameRange& range,
                                         const VisionSegmentationConfig& config) {
    if (range.end > stream.frames.size() || range.begin >= range.end) {
        raise(ErrorKind::InvalidInput, "frame range outside stream " + stream.specimen_id);
    }
    std::vector<MeltPoolGeometry> geometries;
    std::vector<double> timestamps;
    geometries.reserve(range.size());
    for (std::size_t i = range.begin; i < range.end; ++i) {
        const Frame& frame = stream.frames[i];
        geometries.push_back(
            melt_pool_geometry(segment_melt_pool(frame, config), frame.pixel_size_um, config.max_area_fraction));
        timestamps.push_back(frame.timestamp_s);
    }
    return aggregate_layer_vision(range.layer_index, geometries, timestamps);
}

}  // namespace dedmon::vision
