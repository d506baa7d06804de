#include "featurex/shape_features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace featurex {

namespace {

double contour_perimeter(const ContourPath& contour) {
    const auto& pts = contour.points;
    if (pts.size() < 2) return 4.0; // single-pixel convention
    double acc = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        const PointI& a = pts[i];
        const PointI& b = pts[(i + 1) % pts.size()];
        const int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
        acc += (dx + dy == 2) ? std::numbers::sqrt2 : 1.0;
    }
    return acc;
}

// Euler number with 8-connected foreground and 4-connected background:
// foreground components minus holes. Holes are background components of the
// 1-padded bbox grid not reachable from the border.
int euler_number(const PixelCloud& cloud) {
    const int w = cloud.bbox.width() + 2;
    const int h = cloud.bbox.height() + 2;
    const int x0 = static_cast<int>(cloud.bbox.x_min) - 1;
    const int y0 = static_cast<int>(cloud.bbox.y_min) - 1;
    std::vector<uint8_t> fg(static_cast<size_t>(w) * h, 0);
    for (const Pixel& p : cloud.pixels)
        fg[static_cast<size_t>(static_cast<int>(p.y) - y0) * w + (static_cast<int>(p.x) - x0)] = 1;

    std::vector<int> mark(fg.size(), 0);
    std::vector<std::pair<int, int>> stack;
    auto at = [&](int x, int y) -> size_t { return static_cast<size_t>(y) * w + x; };

    int components = 0;
    constexpr int k8[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!fg[at(x, y)] || mark[at(x, y)]) continue;
            ++components;
            stack.push_back({x, y});
            mark[at(x, y)] = 1;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (const auto& d : k8) {
                    const int nx = cx + d[0], ny = cy + d[1];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    if (fg[at(nx, ny)] && !mark[at(nx, ny)]) {
                        mark[at(nx, ny)] = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }

    // Flood the outer background 4-connected from (0,0) (a padding cell).
    constexpr int k4[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    stack.push_back({0, 0});
    mark[at(0, 0)] = 2;
    while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (const auto& d : k4) {
            const int nx = cx + d[0], ny = cy + d[1];
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            if (!fg[at(nx, ny)] && !mark[at(nx, ny)]) {
                mark[at(nx, ny)] = 2;
                stack.push_back({nx, ny});
            }
        }
    }
    int holes = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (fg[at(x, y)] || mark[at(x, y)]) continue;
            ++holes;
            stack.push_back({x, y});
            mark[at(x, y)] = 3;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                for (const auto& d : k4) {
                    const int nx = cx + d[0], ny = cy + d[1];
                    if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                    if (!fg[at(nx, ny)] && !mark[at(nx, ny)]) {
                        mark[at(nx, ny)] = 3;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    return components - holes;
}

// Count of lattice pixels inside or on the hull polygon.
double rasterized_hull_area(const PixelCloud& cloud, const ConvexHull& hull) {
    if (hull.degenerate()) return 0.0;
    long long count = 0;
    const int x_min = static_cast<int>(cloud.bbox.x_min);
    const int x_max = static_cast<int>(cloud.bbox.x_max);
    const int y_min = static_cast<int>(cloud.bbox.y_min);
    const int y_max = static_cast<int>(cloud.bbox.y_max);
    for (int y = y_min; y <= y_max; ++y)
        for (int x = x_min; x <= x_max; ++x)
            if (point_in_hull(hull, x, y)) ++count;
    return static_cast<double>(count);
}

void feret_diameters(const ConvexHull& hull, double& feret_max, double& feret_min) {
    const auto& v = hull.vertices;
    feret_max = 0;
    feret_min = 0;
    if (v.size() < 2) return;
    for (size_t i = 0; i < v.size(); ++i) {
        for (size_t j = i + 1; j < v.size(); ++j) {
            const double dx = v[i].x - v[j].x, dy = v[i].y - v[j].y;
            feret_max = std::max(feret_max, std::hypot(dx, dy));
        }
    }
    if (v.size() == 2) return; // degenerate: min width 0
    // Min width over supporting lines through each hull edge.
    feret_min = std::numeric_limits<double>::max();
    for (size_t i = 0; i < v.size(); ++i) {
        const PointI& a = v[i];
        const PointI& b = v[(i + 1) % v.size()];
        const double ex = b.x - a.x, ey = b.y - a.y;
        const double len = std::hypot(ex, ey);
        double width = 0;
        for (const PointI& p : v) {
            const double d = std::abs(ex * (p.y - a.y) - ey * (p.x - a.x)) / len;
            width = std::max(width, d);
        }
        feret_min = std::min(feret_min, width);
    }
}

} // namespace

ShapeFeatureSet shape_features(const PixelCloud& cloud, const ContourPath& contour,
                               const ConvexHull& hull) {
    ShapeFeatureSet f;
    const size_t n = cloud.pixels.size();
    if (n == 0) return f;
    const double dn = static_cast<double>(n);

    f.area = dn;
    f.bbox_x = cloud.bbox.x_min;
    f.bbox_y = cloud.bbox.y_min;
    f.bbox_w = cloud.bbox.width();
    f.bbox_h = cloud.bbox.height();
    f.extent = dn / (f.bbox_w * f.bbox_h);
    f.aspect_ratio = f.bbox_w / f.bbox_h;

    double sx = 0, sy = 0;
    for (const Pixel& p : cloud.pixels) {
        sx += p.x;
        sy += p.y;
    }
    f.centroid_x = sx / dn;
    f.centroid_y = sy / dn;

    if (n == 1) {
        f.perimeter = 4.0;
        f.circularity = 1.0;
    } else {
        f.perimeter = contour_perimeter(contour);
        f.circularity = 4.0 * std::numbers::pi * dn / (f.perimeter * f.perimeter);
    }

    f.convex_area = rasterized_hull_area(cloud, hull);
    f.solidity = f.convex_area > 0 ? dn / f.convex_area : 0.0;
    f.equivalent_diameter = std::sqrt(4.0 * dn / std::numbers::pi);

    // Second-moment ellipse with the +1/12 per-pixel correction.
    {
        double mu20 = 0, mu02 = 0, mu11 = 0;
        for (const Pixel& p : cloud.pixels) {
            const double dx = p.x - f.centroid_x;
            const double dy = p.y - f.centroid_y;
            mu20 += dx * dx;
            mu02 += dy * dy;
            mu11 += dx * dy;
        }
        const double a = mu20 / dn + 1.0 / 12.0;
        const double c = mu02 / dn + 1.0 / 12.0;
        const double b = mu11 / dn;
        const double disc = std::sqrt((a - c) * (a - c) / 4.0 + b * b);
        const double l1 = (a + c) / 2.0 + disc;
        const double l2 = (a + c) / 2.0 - disc;
        f.major_axis_len = 4.0 * std::sqrt(std::max(0.0, l1));
        f.minor_axis_len = 4.0 * std::sqrt(std::max(0.0, l2));
        f.eccentricity = l1 > 0 ? std::sqrt(std::max(0.0, 1.0 - l2 / l1)) : 0.0;
        f.elongation = f.minor_axis_len > 0 ? f.major_axis_len / f.minor_axis_len : 0.0;
        double theta = 0.5 * std::atan2(2.0 * b, a - c);
        if (theta <= -std::numbers::pi / 2.0) theta += std::numbers::pi;
        f.orientation = theta;
    }

    f.euler_number = euler_number(cloud);
    feret_diameters(hull, f.feret_max, f.feret_min);

    // Extrema in regionprops order.
    {
        int top = std::numeric_limits<int>::max(), bottom = std::numeric_limits<int>::min();
        int left = std::numeric_limits<int>::max(), right = std::numeric_limits<int>::min();
        for (const Pixel& p : cloud.pixels) {
            top = std::min(top, static_cast<int>(p.y));
            bottom = std::max(bottom, static_cast<int>(p.y));
            left = std::min(left, static_cast<int>(p.x));
            right = std::max(right, static_cast<int>(p.x));
        }
        int top_l = std::numeric_limits<int>::max(), top_r = std::numeric_limits<int>::min();
        int bot_l = std::numeric_limits<int>::max(), bot_r = std::numeric_limits<int>::min();
        int left_t = std::numeric_limits<int>::max(), left_b = std::numeric_limits<int>::min();
        int right_t = std::numeric_limits<int>::max(), right_b = std::numeric_limits<int>::min();
        for (const Pixel& p : cloud.pixels) {
            const int x = static_cast<int>(p.x), y = static_cast<int>(p.y);
            if (y == top) {
                top_l = std::min(top_l, x);
                top_r = std::max(top_r, x);
            }
            if (y == bottom) {
                bot_l = std::min(bot_l, x);
                bot_r = std::max(bot_r, x);
            }
            if (x == left) {
                left_t = std::min(left_t, y);
                left_b = std::max(left_b, y);
            }
            if (x == right) {
                right_t = std::min(right_t, y);
                right_b = std::max(right_b, y);
            }
        }
        const int ex[8] = {top_l, top_r, right, right, bot_r, bot_l, left, left};
        const int ey[8] = {top, top, right_t, right_b, bottom, bottom, left_b, left_t};
        for (int i = 0; i < 8; ++i) {
            f.extrema_x[i] = ex[i];
            f.extrema_y[i] = ey[i];
        }
    }
    return f;
}

const std::vector<std::string>& shape_feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v = {
            "area",        "perimeter",    "bbox_x",        "bbox_y",
            "bbox_w",      "bbox_h",       "centroid_x",    "centroid_y",
            "circularity", "extent",       "aspect_ratio",  "convex_area",
            "solidity",    "equivalent_diameter", "major_axis_len", "minor_axis_len",
            "eccentricity", "elongation",  "orientation",   "euler_number",
            "feret_max",   "feret_min"};
        static const char* corners[8] = {"topleft", "topright", "righttop", "rightbottom",
                                         "bottomright", "bottomleft", "leftbottom", "lefttop"};
        for (const char* c : corners) {
            v.push_back(std::string("extrema_") + c + "_x");
            v.push_back(std::string("extrema_") + c + "_y");
        }
        return v;
    }();
    return names;
}

std::vector<double> shape_feature_values(const ShapeFeatureSet& f) {
    std::vector<double> v = {f.area,        f.perimeter,    f.bbox_x,        f.bbox_y,
                             f.bbox_w,      f.bbox_h,       f.centroid_x,    f.centroid_y,
                             f.circularity, f.extent,       f.aspect_ratio,  f.convex_area,
                             f.solidity,    f.equivalent_diameter, f.major_axis_len,
                             f.minor_axis_len, f.eccentricity, f.elongation,  f.orientation,
                             f.euler_number, f.feret_max,   f.feret_min};
    for (int i = 0; i < 8; ++i) {
        v.push_back(f.extrema_x[i]);
        v.push_back(f.extrema_y[i]);
    }
    return v;
}

} // namespace featurex
