#include "featurex/intensity_features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "featurex/errors.hpp"

namespace featurex {

namespace {

// Linear interpolation between closest ranks over a sorted sample.
double percentile(const std::vector<double>& sorted, double p) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double rank = p / 100.0 * static_cast<double>(n - 1);
    const size_t lo = static_cast<size_t>(rank);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double median_of(const std::vector<double>& sorted) {
    const size_t n = sorted.size();
    return n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

} // namespace

std::pair<double, double> weighted_centroid(const PixelCloud& cloud) {
    double sum = 0, sx = 0, sy = 0;
    for (const Pixel& p : cloud.pixels) {
        sum += p.intensity;
        sx += static_cast<double>(p.x) * p.intensity;
        sy += static_cast<double>(p.y) * p.intensity;
    }
    if (sum <= 0) throw ZeroMassError("weighted centroid of a zero-mass cloud");
    return {sx / sum, sy / sum};
}

IntensityFeatureSet intensity_features(const PixelCloud& cloud, const ContourPath& contour,
                                       int bins) {
    IntensityFeatureSet f;
    const size_t n = cloud.pixels.size();
    if (n == 0) return f;

    std::vector<double> v;
    v.reserve(n);
    for (const Pixel& p : cloud.pixels) v.push_back(static_cast<double>(p.intensity));
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end());

    const double dn = static_cast<double>(n);
    double sum = 0;
    for (double x : v) sum += x;
    f.mean = sum / dn;
    f.min = sorted.front();
    f.max = sorted.back();
    f.range = f.max - f.min;
    f.median = median_of(sorted);
    f.integrated_intensity = sum;

    // Population central moments m2..m6.
    double m2 = 0, m3 = 0, m4 = 0, m5 = 0, m6 = 0;
    for (double x : v) {
        const double d = x - f.mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
        m5 += d2 * d2 * d;
        m6 += d2 * d2 * d2;
    }
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    m5 /= dn;
    m6 /= dn;

    f.variance_biased = m2;
    f.variance = n > 1 ? m2 * dn / (dn - 1.0) : 0.0;
    f.std_biased = std::sqrt(f.variance_biased);
    f.std_dev = std::sqrt(f.variance);
    if (m2 > 0) {
        f.skewness = m3 / std::pow(m2, 1.5);
        f.kurtosis = m4 / (m2 * m2);
        f.excess_kurtosis = f.kurtosis - 3.0;
        f.hyperskewness = m5 / std::pow(m2, 2.5);
        f.hyperflatness = m6 / (m2 * m2 * m2);
    }

    double mad = 0;
    for (double x : v) mad += std::abs(x - f.mean);
    f.mad = mad / dn;

    std::vector<double> devs;
    devs.reserve(n);
    for (double x : sorted) devs.push_back(std::abs(x - f.median));
    std::sort(devs.begin(), devs.end());
    f.median_ad = median_of(devs);

    f.p1 = percentile(sorted, 1);
    f.p10 = percentile(sorted, 10);
    f.p25 = percentile(sorted, 25);
    f.p75 = percentile(sorted, 75);
    f.p90 = percentile(sorted, 90);
    f.p99 = percentile(sorted, 99);
    f.iqr = f.p75 - f.p25;
    f.qcod = (f.p75 + f.p25) != 0 ? f.iqr / (f.p75 + f.p25) : 0.0;

    // Robust MAD: mean absolute deviation of the [p10, p90] subset about
    // the subset mean.
    {
        double rsum = 0;
        size_t rn = 0;
        for (double x : sorted) {
            if (x >= f.p10 && x <= f.p90) {
                rsum += x;
                ++rn;
            }
        }
        if (rn > 0) {
            const double rmean = rsum / static_cast<double>(rn);
            double acc = 0;
            for (double x : sorted)
                if (x >= f.p10 && x <= f.p90) acc += std::abs(x - rmean);
            f.rmad = acc / static_cast<double>(rn);
        }
    }

    // Mode: most frequent raw intensity, ties to the smallest value.
    {
        size_t best_run = 0;
        double best_val = sorted[0];
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j < n && sorted[j] == sorted[i]) ++j;
            if (j - i > best_run) {
                best_run = j - i;
                best_val = sorted[i];
            }
            i = j;
        }
        f.mode = best_val;
    }

    double energy = 0;
    for (double x : v) energy += x * x;
    f.energy = energy;
    f.rms = std::sqrt(energy / dn);
    f.cov = f.mean != 0 ? f.std_dev / f.mean : 0.0;

    // Histogram entropy/uniformity over [min, max].
    {
        const int nb = std::max(2, bins);
        std::vector<size_t> hist(static_cast<size_t>(nb), 0);
        if (f.range == 0) {
            hist[0] = n;
        } else {
            for (double x : v) {
                int b = static_cast<int>(static_cast<double>(nb) * (x - f.min) / f.range);
                if (b >= nb) b = nb - 1;
                ++hist[static_cast<size_t>(b)];
            }
        }
        double entropy = 0, uniformity = 0;
        for (size_t c : hist) {
            if (c == 0) continue;
            const double p = static_cast<double>(c) / dn;
            entropy -= p * std::log2(p);
            uniformity += p * p;
        }
        f.entropy = entropy;
        f.uniformity = uniformity;
    }

    // Edge statistics over unique contour pixels.
    {
        std::set<std::pair<int, int>> seen;
        std::vector<double> edge;
        for (const PointI& pt : contour.points) seen.insert({pt.x, pt.y});
        for (const Pixel& p : cloud.pixels)
            if (seen.count({static_cast<int>(p.x), static_cast<int>(p.y)}))
                edge.push_back(static_cast<double>(p.intensity));
        if (!edge.empty()) {
            double es = 0, emin = edge[0], emax = edge[0];
            for (double x : edge) {
                es += x;
                emin = std::min(emin, x);
                emax = std::max(emax, x);
            }
            const double en = static_cast<double>(edge.size());
            f.edge_mean = es / en;
            f.edge_min = emin;
            f.edge_max = emax;
            f.edge_integrated = es;
            double ev = 0;
            for (double x : edge) ev += (x - f.edge_mean) * (x - f.edge_mean);
            f.edge_std = std::sqrt(ev / en);
        }
    }

    {
        double isum = 0;
        for (const Pixel& p : cloud.pixels) isum += p.intensity;
        if (isum > 0) {
            auto [wx, wy] = weighted_centroid(cloud);
            f.weighted_centroid_x = wx;
            f.weighted_centroid_y = wy;
        }
    }
    return f;
}

const std::vector<std::string>& intensity_feature_names() {
    static const std::vector<std::string> names = {
        "mean",          "median",          "mode",
        "min",           "max",             "range",
        "variance",      "variance_biased", "std",
        "std_biased",    "mad",             "median_ad",
        "rmad",          "iqr",             "p1",
        "p10",           "p25",             "p75",
        "p90",           "p99",             "skewness",
        "kurtosis",      "excess_kurtosis", "hyperskewness",
        "hyperflatness", "energy",          "rms",
        "entropy",       "uniformity",      "qcod",
        "cov",           "integrated_intensity",
        "edge_mean",     "edge_min",        "edge_max",
        "edge_std",      "edge_integrated", "weighted_centroid_x",
        "weighted_centroid_y"};
    return names;
}

std::vector<double> intensity_feature_values(const IntensityFeatureSet& f) {
    return {f.mean,
            f.median,
            f.mode,
            f.min,
            f.max,
            f.range,
            f.variance,
            f.variance_biased,
            f.std_dev,
            f.std_biased,
            f.mad,
            f.median_ad,
            f.rmad,
            f.iqr,
            f.p1,
            f.p10,
            f.p25,
            f.p75,
            f.p90,
            f.p99,
            f.skewness,
            f.kurtosis,
            f.excess_kurtosis,
            f.hyperskewness,
            f.hyperflatness,
            f.energy,
            f.rms,
            f.entropy,
            f.uniformity,
            f.qcod,
            f.cov,
            f.integrated_intensity,
            f.edge_mean,
            f.edge_min,
            f.edge_max,
            f.edge_std,
            f.edge_integrated,
            f.weighted_centroid_x,
            f.weighted_centroid_y};
}

} // namespace featurex
