#include "featurex/hull.hpp"

#include <algorithm>
#include <cmath>

namespace featurex {

namespace {

long long cross(const PointI& o, const PointI& a, const PointI& b) {
    return static_cast<long long>(a.x - o.x) * (b.y - o.y) -
           static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

} // namespace

ConvexHull convex_hull(const PixelCloud& cloud) {
    std::vector<PointI> pts;
    pts.reserve(cloud.pixels.size());
    for (const Pixel& p : cloud.pixels)
        pts.push_back({static_cast<int>(p.x), static_cast<int>(p.y)});
    std::sort(pts.begin(), pts.end(),
              [](const PointI& a, const PointI& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    ConvexHull hull;
    const size_t n = pts.size();
    if (n <= 2) {
        hull.vertices = pts;
        return hull;
    }

    // Monotone chain; strict cross test removes collinear interior points.
    std::vector<PointI> h(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    if (h.size() < 3) { // all points collinear
        hull.vertices = {pts.front(), pts.back()};
        return hull;
    }
    hull.vertices = std::move(h);
    return hull;
}

double polygon_area(const ConvexHull& hull) {
    if (hull.degenerate()) return 0.0;
    double acc = 0.0;
    const auto& v = hull.vertices;
    for (size_t i = 0; i < v.size(); ++i) {
        const PointI& a = v[i];
        const PointI& b = v[(i + 1) % v.size()];
        acc += static_cast<double>(a.x) * b.y - static_cast<double>(b.x) * a.y;
    }
    return std::abs(acc) / 2.0;
}

bool point_in_hull(const ConvexHull& hull, double px, double py) {
    const auto& v = hull.vertices;
    constexpr double eps = 1e-9;
    if (v.empty()) return false;
    if (v.size() == 1) return std::abs(px - v[0].x) < eps && std::abs(py - v[0].y) < eps;
    if (v.size() == 2) {
        const double ax = v[0].x, ay = v[0].y, bx = v[1].x, by = v[1].y;
        const double c = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
        if (std::abs(c) > eps) return false;
        const double dot = (px - ax) * (bx - ax) + (py - ay) * (by - ay);
        const double len2 = (bx - ax) * (bx - ax) + (by - ay) * (by - ay);
        return dot >= -eps && dot <= len2 + eps;
    }
    for (size_t i = 0; i < v.size(); ++i) {
        const PointI& a = v[i];
        const PointI& b = v[(i + 1) % v.size()];
        const double c = static_cast<double>(b.x - a.x) * (py - a.y) -
                         static_cast<double>(b.y - a.y) * (px - a.x);
        if (c < -eps) return false;
    }
    return true;
}

} // namespace featurex
