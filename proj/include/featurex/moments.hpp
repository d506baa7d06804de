#pragma once

#include <string>
#include <vector>

#include "featurex/roi.hpp"

namespace featurex {

// Geometric moments of a pixel cloud, p,q <= 3. Raw moments are about the
// image origin, central moments about the (weighted) centroid. Normalized
// central moments eta_pq = mu_pq / mu00^(1+(p+q)/2); Hu invariants h1..h7
// are the standard polynomial combinations of eta.
struct MomentSet {
    double raw[4][4] = {};     // m[p][q]
    double central[4][4] = {}; // mu[p][q]
    double eta[4][4] = {};     // defined for p+q >= 2
    double hu[7] = {};
    double centroid_x = 0, centroid_y = 0;
};

// weighted=true uses intensity as mass (throws ZeroMassError when sum I = 0);
// weighted=false treats every pixel as unit mass.
MomentSet compute_moments(const PixelCloud& cloud, bool weighted);

// Canonical column order of the moments feature group (binary + weighted).
const std::vector<std::string>& moment_feature_names();
std::vector<double> moment_feature_values(const MomentSet& binary, const MomentSet& weighted);

} // namespace featurex
