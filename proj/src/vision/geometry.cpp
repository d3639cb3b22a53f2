#include "dedmon/vision/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "dedmon/core/error.hpp"
#include "dedmon/core/rng.hpp"

namespace dedmon::vision {
namespace {

double dist(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

Circle circle_from(const Point2& a, const Point2& b) {
    return {{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, 0.5 * dist(a, b)};
}

Circle circle_from(const Point2& a, const Point2& b, const Point2& c) {
    const double bx = b.x - a.x, by = b.y - a.y;
    const double cx = c.x - a.x, cy = c.y - a.y;
    const double d = 2.0 * (bx * cy - by * cx);
    const double scale = std::max({std::abs(bx), std::abs(by), std::abs(cx), std::abs(cy), 1e-300});
    if (std::abs(d) <= 1e-14 * scale * scale) {
        // Collinear: the widest pair spans the other point.
        Circle best = circle_from(a, b);
        for (const Circle& cand : {circle_from(a, c), circle_from(b, c)}) {
            if (cand.radius > best.radius) best = cand;
        }
        return best;
    }
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    const Point2 center{a.x + (cy * b2 - by * c2) / d, a.y + (bx * c2 - cx * b2) / d};
    return {center, std::max({dist(center, a), dist(center, b), dist(center, c)})};
}

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

bool contains(const Circle& c, const Point2& p, double tolerance) {
    return dist(c.center, p) <= c.radius + tolerance;
}

Circle min_enclosing_circle(std::span<const Point2> points) {
    if (points.empty()) raise(ErrorKind::InvalidInput, "enclosing circle of an empty point set");
    std::vector<Point2> pts(points.begin(), points.end());
    CounterRng rng(0x6d65632d77656c7aULL);
    for (std::size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[rng.index(i)]);

    const double eps = 1e-12;
    auto inside = [&](const Circle& c, const Point2& p) { return dist(c.center, p) <= c.radius * (1.0 + eps) + eps; };

    Circle c{pts[0], 0.0};
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (inside(c, pts[i])) continue;
        c = {pts[i], 0.0};
        for (std::size_t j = 0; j < i; ++j) {
            if (inside(c, pts[j])) continue;
            c = circle_from(pts[i], pts[j]);
            for (std::size_t k = 0; k < j; ++k) {
                if (inside(c, pts[k])) continue;
                c = circle_from(pts[i], pts[j], pts[k]);
            }
        }
    }
    // Grow to the farthest point so containment is exact in floating point.
    double r = c.radius;
    for (const auto& p : pts) r = std::max(r, dist(c.center, p));
    c.radius = r;
    return c;
}

Hull convex_hull(std::span<const Point2> points) {
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    Hull hull;
    if (pts.size() < 3) {
        hull.vertices = pts;
        hull.degenerate = true;
        return hull;
    }
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p) <= 0.0) --k;
        h[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    hull.vertices = std::move(h);
    hull.degenerate = hull.vertices.size() < 3;
    return hull;
}

double polygon_area(std::span<const Point2> polygon) {
    const std::size_t n = polygon.size();
    if (n < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = polygon[i];
        const Point2& b = polygon[(i + 1) % n];
        twice += a.x * b.y - b.x * a.y;
    }
    return 0.5 * twice;
}

}  // namespace dedmon::vision
