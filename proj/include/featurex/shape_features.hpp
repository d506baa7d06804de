#pragma once

#include <string>
#include <vector>

#include "featurex/contour.hpp"
#include "featurex/hull.hpp"
#include "featurex/roi.hpp"

namespace featurex {

// Shape descriptors of one ROI. Conventions:
//  - pixel coordinates are pixel centers at integer lattice points
//  - perimeter sums contour chain steps (1 for 4-steps, sqrt(2) diagonal);
//    a single pixel reports perimeter 4 and circularity 1
//  - axes come from the eigen-decomposition of the central second-moment
//    matrix with the +1/12 per-pixel correction, axis = 4*sqrt(lambda/area)
//  - convex_area counts lattice pixels inside or on the hull; degenerate
//    (collinear) hulls report convex_area 0 and solidity 0
//  - euler_number uses 8-connected foreground / 4-connected background
struct ShapeFeatureSet {
    double area = 0;
    double perimeter = 0;
    double bbox_x = 0, bbox_y = 0, bbox_w = 0, bbox_h = 0;
    double centroid_x = 0, centroid_y = 0;
    double circularity = 0; // 4*pi*area / perimeter^2
    double extent = 0;      // area / bbox area
    double aspect_ratio = 0; // bbox_w / bbox_h
    double convex_area = 0;
    double solidity = 0;
    double equivalent_diameter = 0;
    double major_axis_len = 0;
    double minor_axis_len = 0;
    double eccentricity = 0;
    double elongation = 0;  // major_axis_len / minor_axis_len
    double orientation = 0; // radians in (-pi/2, pi/2], major eigenvector angle
    double euler_number = 0;
    double feret_max = 0;
    double feret_min = 0;
    // Extrema pixel coordinates in regionprops order: top-left, top-right,
    // right-top, right-bottom, bottom-right, bottom-left, left-bottom, left-top.
    double extrema_x[8] = {};
    double extrema_y[8] = {};
};

ShapeFeatureSet shape_features(const PixelCloud& cloud, const ContourPath& contour,
                               const ConvexHull& hull);

const std::vector<std::string>& shape_feature_names();
std::vector<double> shape_feature_values(const ShapeFeatureSet& f);

} // namespace featurex
