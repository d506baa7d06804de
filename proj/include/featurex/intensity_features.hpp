#pragma once

#include <string>
#include <vector>

#include "featurex/contour.hpp"
#include "featurex/roi.hpp"

namespace featurex {

// First-order intensity statistics of one ROI plus edge (contour) statistics.
// Moment-family statistics use population (biased) central moments
// m_k = (1/n) * sum (I - mean)^k; ratio statistics with a zero denominator
// report 0. Entropy is in bits over a fixed-width histogram of [min, max].
struct IntensityFeatureSet {
    double mean = 0, median = 0, mode = 0;
    double min = 0, max = 0, range = 0;
    double variance = 0;        // unbiased (n-1 denominator)
    double variance_biased = 0; // population (n denominator)
    double std_dev = 0;         // unbiased
    double std_biased = 0;
    double mad = 0;       // mean absolute deviation from the mean
    double median_ad = 0; // median absolute deviation from the median
    double rmad = 0;      // mean absolute deviation within [p10, p90]
    double iqr = 0;
    double p1 = 0, p10 = 0, p25 = 0, p75 = 0, p90 = 0, p99 = 0;
    double skewness = 0;
    double kurtosis = 0;
    double excess_kurtosis = 0;
    double hyperskewness = 0;
    double hyperflatness = 0;
    double energy = 0;
    double rms = 0;
    double entropy = 0;
    double uniformity = 0;
    double qcod = 0; // (p75 - p25) / (p75 + p25)
    double cov = 0;  // std / mean
    double integrated_intensity = 0;
    double edge_mean = 0, edge_min = 0, edge_max = 0, edge_std = 0, edge_integrated = 0;
    double weighted_centroid_x = 0, weighted_centroid_y = 0;
};

IntensityFeatureSet intensity_features(const PixelCloud& cloud, const ContourPath& contour,
                                       int bins = 256);

// (sum x*I / sum I, sum y*I / sum I). Throws ZeroMassError when sum I = 0.
std::pair<double, double> weighted_centroid(const PixelCloud& cloud);

// Canonical column order of the intensity feature group.
const std::vector<std::string>& intensity_feature_names();
std::vector<double> intensity_feature_values(const IntensityFeatureSet& f);

} // namespace featurex
