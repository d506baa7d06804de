#pragma once

#include <vector>

#include "featurex/roi.hpp"

namespace featurex {

struct PointI {
    int x = 0;
    int y = 0;

    bool operator==(const PointI&) const = default;
};

// Closed boundary of a pixel cloud. Consecutive points (cyclically) are
// 8-adjacent; every point has a 4-neighbor outside the cloud. Points may
// repeat where the trace walks back along one-pixel-wide appendages.
struct ContourPath {
    std::vector<PointI> points;
};

// Moore-neighborhood boundary trace of the largest 8-connected component,
// counter-clockwise (shoelace-positive in (x, y) lattice coordinates).
// A single pixel yields a one-point path.
ContourPath trace_contour(const PixelCloud& cloud);

} // namespace featurex
