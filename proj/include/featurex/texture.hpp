#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "featurex/roi.hpp"

namespace featurex {

// ROI intensities discretized to ng grey levels over the bbox lattice.
// Fixed-bin-number min-max rule:
//   level(v) = min(ng-1, floor(ng*(v-min)/(max-min+1)))
// Constant ROIs map entirely to level 0. Cells outside the ROI hold -1.
struct DiscretizedRoi {
    int width = 0, height = 0; // bbox dims
    int x0 = 0, y0 = 0;        // bbox origin in image coordinates
    int ng = 0;
    std::vector<int16_t> grid; // level in [0, ng) or -1 outside
    size_t roi_pixels = 0;

    int16_t level(int x, int y) const { return grid[static_cast<size_t>(y) * width + x]; }
    bool inside(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height && level(x, y) >= 0;
    }
};

DiscretizedRoi discretize(const PixelCloud& cloud, int ng);

struct GlcmParams {
    int ng = 256;
    int offset = 1;                         // pixel distance d >= 1
    std::vector<int> angles = {0, 45, 90, 135};
    bool symmetric = true;
};

// Normalized grey-level co-occurrence matrix for one angle.
// pair_count == 0 signals an empty matrix (no valid pair at this angle);
// all features of an empty matrix are 0.
struct GlcmMatrix {
    int ng = 0;
    int angle = 0;
    uint64_t pair_count = 0;
    std::vector<double> p; // ng*ng probabilities, row-major (i*ng + j)

    double at(int i, int j) const { return p[static_cast<size_t>(i) * ng + j]; }
};

GlcmMatrix glcm(const DiscretizedRoi& roi, int offset, int angle, bool symmetric);

// Sparse (level, length-or-size, count) cell of a run/zone matrix.
struct GreyCountCell {
    int level = 0;
    int extent = 0; // run length or zone size
    uint64_t count = 0;
};

// Grey-level run-length matrix for one angle: counts R(g, l) of maximal
// collinear constant-level runs. Runs break at ROI boundaries. Cells are
// sorted by (level, length).
struct RunLengthMatrix {
    int ng = 0;
    int angle = 0;
    uint64_t total_runs = 0;
    size_t roi_pixels = 0;
    std::vector<GreyCountCell> cells;

    uint64_t at(int g, int l) const;
};

RunLengthMatrix glrlm(const DiscretizedRoi& roi, int angle);

// Grey-level size-zone matrix: counts S(g, s) of 8-connected equal-level
// zones. Cells are sorted by (level, size).
struct SizeZoneMatrix {
    int ng = 0;
    uint64_t total_zones = 0;
    size_t roi_pixels = 0;
    std::vector<GreyCountCell> cells;

    uint64_t at(int g, int size) const;
};

SizeZoneMatrix glszm(const DiscretizedRoi& roi);

// Neighborhood grey-tone difference table. A pixel is valid when it has at
// least one in-ROI 8-neighbor; s[i] = sum |g_i - mean of in-ROI neighborhood|
// over valid pixels of level i, with grey values g = level + 1.
struct NgtdmTable {
    int ng = 0;
    uint64_t valid_pixels = 0;
    std::vector<uint64_t> n; // per-level valid pixel counts
    std::vector<double> s;   // per-level accumulated differences
};

NgtdmTable ngtdm(const DiscretizedRoi& roi);

// Per-family statistics in canonical order. Grey values in the weight-bearing
// sums are 1-based (g = level + 1); see docs/formulas.md for the full sheet.
using NamedValues = std::vector<std::pair<std::string, double>>;

NamedValues glcm_features(const GlcmMatrix& m);
NamedValues glrlm_features(const RunLengthMatrix& m);
NamedValues glszm_features(const SizeZoneMatrix& m);
NamedValues ngtdm_features(const NgtdmTable& t);

const std::vector<std::string>& glcm_feature_names();
const std::vector<std::string>& glrlm_feature_names();
const std::vector<std::string>& glszm_feature_names();
const std::vector<std::string>& ngtdm_feature_names();

} // namespace featurex
