#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dedmon/core/error.hpp"
#include "dedmon/vision/frame.hpp"
#include "dedmon/vision/geometry.hpp"
#include "dedmon/vision/melt_pool.hpp"
#include "test_support.hpp"

using namespace dedmon;
using namespace dedmon::vision;

namespace {

std::vector<Point2> random_points(CounterRng& rng, std::size_t n) {
    std::vector<Point2> p(n);
    for (auto& q : p) q = {100.0 * rng.uniform(), 100.0 * rng.uniform()};
    return p;
}

bool encloses(const Circle& c, std::span<const Point2> pts, double tol) {
    for (const auto& p : pts) {
        if (std::hypot(p.x - c.center.x, p.y - c.center.y) > c.radius + tol) return false;
    }
    return true;
}

/// Smallest circle among all pair-diameter and triple-circumcircle
/// candidates that contain every point.
double brute_force_radius(std::span<const Point2> pts) {
    if (pts.size() == 1) return 0.0;
    double best = INFINITY;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Circle c{{(pts[i].x + pts[j].x) / 2, (pts[i].y + pts[j].y) / 2},
                           std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) / 2};
            if (c.radius < best && encloses(c, pts, 1e-9)) best = c.radius;
            for (std::size_t k = j + 1; k < n; ++k) {
                const double ax = pts[i].x, ay = pts[i].y, bx = pts[j].x, by = pts[j].y, cx = pts[k].x, cy = pts[k].y;
                const double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
                if (std::abs(d) < 1e-12) continue;
                const double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) +
                                   (cx * cx + cy * cy) * (ay - by)) / d;
                const double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) +
                                   (cx * cx + cy * cy) * (bx - ax)) / d;
                const Circle cc{{ux, uy}, std::hypot(ax - ux, ay - uy)};
                if (cc.radius < best && encloses(cc, pts, 1e-9)) best = cc.radius;
            }
        }
    }
    return best;
}

Mask disk_mask(int size, double cx, double cy, double r) {
    Mask m(size, size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) m.at(x, y) = std::hypot(x + 0.5 - cx, y + 0.5 - cy) <= r;
    }
    return m;
}

Mask random_blob_mask(CounterRng& rng, int size) {
    Mask m(size, size);
    const int blobs = 1 + static_cast<int>(rng.index(4));
    for (int b = 0; b < blobs; ++b) {
        const double cx = size * (0.3 + 0.4 * rng.uniform()), cy = size * (0.3 + 0.4 * rng.uniform());
        const double rx = 2.0 + 10.0 * rng.uniform(), ry = 2.0 + 10.0 * rng.uniform();
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const double u = (x - cx) / rx, v = (y - cy) / ry;
                if (u * u + v * v <= 1.0) m.at(x, y) = 1;
            }
        }
    }
    for (int i = 0; i < 20; ++i) m.at(static_cast<int>(rng.index(size)), static_cast<int>(rng.index(size))) = 1;
    return largest_component(m);
}

Mask naive_square_filter(const Mask& m, int r, bool take_max) {
    Mask out(m.width, m.height);
    for (int y = 0; y < m.height; ++y) {
        for (int x = 0; x < m.width; ++x) {
            std::uint8_t v = take_max ? 0 : 1;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || yy < 0 || xx >= m.width || yy >= m.height) continue;
                    v = take_max ? std::max(v, m.at(xx, yy)) : std::min(v, m.at(xx, yy));
                }
            }
            out.at(x, y) = v;
        }
    }
    return out;
}

Frame blob_frame(int size, double cx, double cy, double sigma, double peak, double t) {
    Frame f;
    f.width = f.height = size;
    f.timestamp_s = t;
    f.pixels.resize(static_cast<std::size_t>(size) * size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double d2 = (x + 0.5 - cx) * (x + 0.5 - cx) + (y + 0.5 - cy) * (y + 0.5 - cy);
            f.pixels[static_cast<std::size_t>(y) * size + x] =
                static_cast<std::uint16_t>(20.0 + peak * std::exp(-d2 / (2 * sigma * sigma)));
        }
    }
    return f;
}

}  // namespace

TEST(EnclosingCircle, MatchesBruteForceOracle) {
    CounterRng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = random_points(rng, 1 + rng.index(32));
        const Circle c = min_enclosing_circle(pts);
        ASSERT_NEAR(c.radius, brute_force_radius(pts), 1e-9) << trial;
        for (const auto& p : pts) ASSERT_TRUE(contains(c, p, 1e-9));
    }
}

TEST(EnclosingCircle, RemovingAHullVertexNeverShrinksBelowOptimum) {
    CounterRng rng(78);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pts = random_points(rng, 5 + rng.index(20));
        const Circle full = min_enclosing_circle(pts);
        const Hull hull = convex_hull(pts);
        for (std::size_t drop = 0; drop < hull.vertices.size(); ++drop) {
            std::vector<Point2> rest;
            for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
                if (i != drop) rest.push_back(hull.vertices[i]);
            }
            const Circle smaller = min_enclosing_circle(rest);
            // A circle that encloses everything cannot beat the optimum.
            if (encloses(smaller, pts, 1e-9)) EXPECT_GE(smaller.radius, full.radius - 1e-9);
        }
    }
}

TEST(EnclosingCircle, DegenerateSets) {
    const std::vector<Point2> one{{3, 4}};
    EXPECT_DOUBLE_EQ(min_enclosing_circle(one).radius, 0.0);
    const std::vector<Point2> dup{{1, 1}, {1, 1}, {1, 1}};
    EXPECT_DOUBLE_EQ(min_enclosing_circle(dup).radius, 0.0);
    const std::vector<Point2> line{{0, 0}, {1, 0}, {2, 0}, {4, 0}};
    EXPECT_NEAR(min_enclosing_circle(line).radius, 2.0, 1e-12);
    EXPECT_THROW(min_enclosing_circle(std::vector<Point2>{}), Error);
}

TEST(ConvexHull, ContainsEveryPointAndIsCounterClockwise) {
    CounterRng rng(79);
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = random_points(rng, 3 + rng.index(60));
        const Hull h = convex_hull(pts);
        ASSERT_FALSE(h.degenerate);
        const auto& v = h.vertices;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto& a = v[i];
            const auto& b = v[(i + 1) % v.size()];
            for (const auto& p : pts) {
                const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
                ASSERT_GE(cross, -1e-9);
            }
        }
        EXPECT_GT(polygon_area(v), 0.0);
    }
}

TEST(ConvexHull, DropsCollinearAndFlagsDegenerate) {
    const std::vector<Point2> sq{{0, 0}, {1, 0}, {2, 0}, {2, 2}, {1, 2}, {0, 2}, {1, 1}};
    const Hull h = convex_hull(sq);
    EXPECT_EQ(h.vertices.size(), 4u);
    EXPECT_DOUBLE_EQ(polygon_area(h.vertices), 4.0);
    const std::vector<Point2> line{{0, 0}, {1, 1}, {2, 2}};
    EXPECT_TRUE(convex_hull(line).degenerate);
}

TEST(Morphology, SquareFiltersMatchNaiveOracle) {
    CounterRng rng(80);
    for (int trial = 0; trial < 20; ++trial) {
        Mask m(23, 17);
        for (auto& b : m.bits) b = rng.uniform() < 0.4;
        for (int r : {1, 2}) {
            EXPECT_EQ(erode(m, r), naive_square_filter(m, r, false));
            EXPECT_EQ(dilate(m, r), naive_square_filter(m, r, true));
        }
    }
}

TEST(Morphology, LargestComponentUsesEightConnectivity) {
    Mask m(6, 6);
    m.at(0, 0) = m.at(1, 1) = m.at(2, 2) = 1;  // diagonal chain of 3
    m.at(5, 0) = m.at(5, 1) = 1;               // 2 pixels
    const Mask out = largest_component(m);
    EXPECT_EQ(out.count(), 3u);
    EXPECT_EQ(out.at(2, 2), 1);
    EXPECT_EQ(out.at(5, 0), 0);
}

TEST(MeltPool, RatiosInUnitIntervalOnRandomMasks) {
    CounterRng rng(81);
    int valid = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const Mask m = random_blob_mask(rng, 64);
        const auto g = melt_pool_geometry(m, 4.5);
        if (!g.valid) continue;
        ++valid;
        ASSERT_GT(g.core2circle_ratio, 0.0);
        ASSERT_LE(g.core2circle_ratio, 1.0);
        ASSERT_GT(g.convexity, 0.0);
        ASSERT_LE(g.convexity, 1.0);
        ASSERT_GE(g.bbox_length_um, g.bbox_width_um);
    }
    EXPECT_GT(valid, 450);
}

TEST(MeltPool, FilledSquareCoreToCircleIsTwoOverPi) {
    for (int side : {57, 80, 101}) {  // circumradius >= 40 px
        Mask m(128, 128);
        for (int y = 10; y < 10 + side; ++y) {
            for (int x = 12; x < 12 + side; ++x) m.at(x, y) = 1;
        }
        const auto g = melt_pool_geometry(m, 1.0, 1.0);
        ASSERT_TRUE(g.valid);
        EXPECT_NEAR(g.core2circle_ratio, 2.0 / std::numbers::pi, 0.03) << side;
        EXPECT_NEAR(g.convexity, 1.0, 1e-12);
        EXPECT_NEAR(g.circle_radius_um, side / std::sqrt(2.0), 1e-9);
        EXPECT_NEAR(g.bbox_length_um, side, 1e-9);
    }
}

TEST(MeltPool, DiskApproachesUnitRatiosAndScalesWithPixelSize) {
    const Mask m = disk_mask(128, 64, 64, 30);
    const auto g1 = melt_pool_geometry(m, 1.0);
    const auto g2 = melt_pool_geometry(m, 4.5);
    ASSERT_TRUE(g1.valid);
    EXPECT_GT(g1.core2circle_ratio, 0.9);
    EXPECT_GT(g1.convexity, 0.95);
    EXPECT_NEAR(g2.contour_area_um2, g1.contour_area_um2 * 4.5 * 4.5, 1e-6);
    EXPECT_NEAR(g2.circle_radius_um, g1.circle_radius_um * 4.5, 1e-9);
    EXPECT_DOUBLE_EQ(g2.core2circle_ratio, g1.core2circle_ratio);
}

TEST(MeltPool, TinyOrHugeMasksAreInvalid) {
    Mask tiny(10, 10);
    tiny.at(3, 3) = tiny.at(4, 3) = 1;
    EXPECT_FALSE(melt_pool_geometry(tiny, 1.0).valid);
    Mask full(10, 10);
    for (auto& b : full.bits) b = 1;
    EXPECT_FALSE(melt_pool_geometry(full, 1.0, 0.5).valid);
}

TEST(MeltPool, DiskSurvivesOpeningAndClosing) {
    const Frame f = blob_frame(128, 60.3, 70.1, 10.0, 50000.0, 0.0);
    VisionSegmentationConfig cfg;
    const Mask m = segment_melt_pool(f, cfg);
    // Threshold at 0.8 of the peak: radius sigma * sqrt(2 ln 1.25).
    const double r = 10.0 * std::sqrt(2.0 * std::log(1.25));
    EXPECT_NEAR(static_cast<double>(m.count()), std::numbers::pi * r * r, 0.15 * std::numbers::pi * r * r);
    EXPECT_EQ(largest_component(m).count(), m.count());
}

TEST(MeltPool, DarkFrameGivesEmptyMask) {
    Frame f;
    f.width = f.height = 8;
    f.pixels.assign(64, 0);
    EXPECT_EQ(segment_melt_pool(f, {}).count(), 0u);
}

TEST(VisionLayers, DetectsAndTrimsBrightRuns) {
    FrameStream s;
    s.specimen_id = "v";
    s.fps = 30.0;
    const double dt = 1.0 / 30.0;
    std::vector<std::pair<int, int>> truth;
    int idx = 0;
    for (int layer = 0; layer < 3; ++layer) {
        for (int i = 0; i < 20; ++i, ++idx) s.frames.push_back(blob_frame(32, 16, 16, 1, 0.0, idx * dt));
        truth.push_back({idx, idx + 60});
        for (int i = 0; i < 60; ++i, ++idx) s.frames.push_back(blob_frame(32, 16, 16, 4, 40000.0, idx * dt));
    }
    for (int i = 0; i < 20; ++i, ++idx) s.frames.push_back(blob_frame(32, 16, 16, 1, 0.0, idx * dt));
    VisionSegmentationConfig cfg;
    cfg.min_quiet_duration_s = 0.4;
    cfg.trim_head_s = 0.2;
    cfg.trim_tail_s = 0.1;
    const auto det = detect_layers_vision(s, cfg);
    ASSERT_EQ(det.ranges.size(), 3u);
    for (std::size_t l = 0; l < 3; ++l) {
        EXPECT_EQ(det.ranges[l].layer_index, static_cast<int>(l) + 1);
        EXPECT_NEAR(static_cast<double>(det.ranges[l].begin), truth[l].first, 2.0);
        EXPECT_NEAR(static_cast<double>(det.ranges[l].end), truth[l].second, 2.0);
    }
    const auto trimmed = trim_frame_range(det.ranges[0], cfg, 30.0);
    EXPECT_EQ(trimmed.begin - det.ranges[0].begin, 6u);
    EXPECT_EQ(det.ranges[0].end - trimmed.end, 3u);
    const auto layer = extract_layer_vision(s, trimmed, cfg);
    EXPECT_EQ(layer.frame_count, trimmed.size());
    EXPECT_EQ(vision_feature_names().size(), kVisionFeatureCount);
}

TEST(VisionLayers, AllDarkStreamIsEmpty) {
    FrameStream s;
    for (int i = 0; i < 30; ++i) s.frames.push_back(blob_frame(16, 8, 8, 1, 0.0, i / 30.0));
    try {
        detect_layers_vision(s, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptySignal);
    }
}

TEST(VisionLayers, AggregateNeedsTwoValidFrames) {
    MeltPoolGeometry g;
    g.valid = true;
    g.contour_area_um2 = 5.0;
    EXPECT_THROW(aggregate_layer_vision(1, {g}, {0.0}), Error);
    const auto two = aggregate_layer_vision(1, {g, g}, {0.0, 0.5});
    EXPECT_DOUBLE_EQ(two.values[0], 5.0);
    EXPECT_DOUBLE_EQ(two.values[1], 0.0);
    EXPECT_DOUBLE_EQ(two.time_span_s, 0.5);
}

TEST(Frames, ValidateRejectsMismatchedSizesAndTimestamps) {
    FrameStream s;
    s.frames.push_back(blob_frame(8, 4, 4, 1, 100, 0.0));
    s.frames.push_back(blob_frame(8, 4, 4, 1, 100, 0.0));
    EXPECT_THROW(validate(s), Error);
    s.frames[1].timestamp_s = 0.1;
    EXPECT_NO_THROW(validate(s));
    s.frames[1].pixels.pop_back();
    EXPECT_THROW(validate(s), Error);
}
