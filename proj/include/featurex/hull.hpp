#pragma once

#include <vector>

#include "featurex/contour.hpp"

namespace featurex {

// Convex hull of the pixel-center point set, counter-clockwise
// (shoelace-positive), collinear interior points removed. One or two
// vertices for degenerate clouds; such hulls have area 0 by convention.
struct ConvexHull {
    std::vector<PointI> vertices;

    bool degenerate() const { return vertices.size() < 3; }
};

ConvexHull convex_hull(const PixelCloud& cloud);

// Shoelace area of the hull polygon (0 for degenerate hulls).
double polygon_area(const ConvexHull& hull);

// True when p lies inside or on the hull boundary.
bool point_in_hull(const ConvexHull& hull, double px, double py);

} // namespace featurex
