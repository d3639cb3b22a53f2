#pragma once

#include <span>
#include <vector>

namespace dedmon::vision {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct Circle {
    Point2 center;
    double radius = 0.0;
};

bool contains(const Circle& c, const Point2& p, double tolerance = 1e-9);

/// Smallest enclosing circle by randomized incremental construction (Welzl
/// with move-to-front, iterative form). Deterministic: the shuffle uses a
/// fixed seed. Requires at least one point.
Circle min_enclosing_circle(std::span<const Point2> points);

struct Hull {
    std::vector<Point2> vertices;  // counter-clockwise, no repeated start
    bool degenerate = false;       // fewer than 3 non-collinear points
};

/// Andrew's monotone chain. Collinear points on edges are dropped.
Hull convex_hull(std::span<const Point2> points);

/// Shoelace area (positive for counter-clockwise vertices).
double polygon_area(std::span<const Point2> polygon);

}  // namespace dedmon::vision
