#include "featurex/moments.hpp"

#include <cmath>

#include "featurex/errors.hpp"

namespace featurex {

namespace {

constexpr double kBinom[4][4] = {
    {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};

void hu_from_eta(const double eta[4][4], double hu[7]) {
    const double n20 = eta[2][0], n02 = eta[0][2], n11 = eta[1][1];
    const double n30 = eta[3][0], n03 = eta[0][3], n21 = eta[2][1], n12 = eta[1][2];
    const double a = n30 + n12; // x-direction odd sum
    const double b = n21 + n03;
    hu[0] = n20 + n02;
    hu[1] = (n20 - n02) * (n20 - n02) + 4.0 * n11 * n11;
    hu[2] = (n30 - 3.0 * n12) * (n30 - 3.0 * n12) + (3.0 * n21 - n03) * (3.0 * n21 - n03);
    hu[3] = a * a + b * b;
    hu[4] = (n30 - 3.0 * n12) * a * (a * a - 3.0 * b * b) +
            (3.0 * n21 - n03) * b * (3.0 * a * a - b * b);
    hu[5] = (n20 - n02) * (a * a - b * b) + 4.0 * n11 * a * b;
    hu[6] = (3.0 * n21 - n03) * a * (a * a - 3.0 * b * b) -
            (n30 - 3.0 * n12) * b * (3.0 * a * a - b * b);
}

} // namespace

MomentSet compute_moments(const PixelCloud& cloud, bool weighted) {
    MomentSet m;
    if (cloud.pixels.empty()) return m;

    // Raw moments about the image origin (the reported values), plus a
    // bbox-local copy. Central moments are derived from the local raw
    // moments: the binomial shift cancels catastrophically when the ROI
    // sits far from the origin, and the shift result is translation
    // invariant, so small local coordinates keep it well conditioned.
    const double x0 = cloud.bbox.x_min, y0 = cloud.bbox.y_min;
    double local[4][4] = {};
    for (const Pixel& p : cloud.pixels) {
        const double w = weighted ? static_cast<double>(p.intensity) : 1.0;
        double xp = 1.0, lxp = 1.0;
        for (int i = 0; i <= 3; ++i) {
            double yq = 1.0, lyq = 1.0;
            for (int j = 0; j <= 3; ++j) {
                m.raw[i][j] += w * xp * yq;
                local[i][j] += w * lxp * lyq;
                yq *= static_cast<double>(p.y);
                lyq *= static_cast<double>(p.y) - y0;
            }
            xp *= static_cast<double>(p.x);
            lxp *= static_cast<double>(p.x) - x0;
        }
    }

    const double m00 = m.raw[0][0];
    if (weighted && m00 <= 0.0) throw ZeroMassError("weighted moments of a zero-mass cloud");
    if (m00 == 0.0) return m;

    const double lcx = local[1][0] / m00;
    const double lcy = local[0][1] / m00;
    m.centroid_x = lcx + x0;
    m.centroid_y = lcy + y0;

    // Binomial shift of the local raw moments to the centroid.
    for (int p = 0; p <= 3; ++p) {
        for (int q = 0; q <= 3; ++q) {
            double acc = 0.0;
            for (int i = 0; i <= p; ++i) {
                for (int j = 0; j <= q; ++j) {
                    acc += kBinom[p][i] * kBinom[q][j] * std::pow(-lcx, p - i) *
                           std::pow(-lcy, q - j) * local[i][j];
                }
            }
            m.central[p][q] = acc;
        }
    }
    m.central[1][0] = 0.0; // exact by definition
    m.central[0][1] = 0.0;

    for (int p = 0; p <= 3; ++p) {
        for (int q = 0; q <= 3; ++q) {
            if (p + q < 2) continue;
            m.eta[p][q] = m.central[p][q] / std::pow(m00, 1.0 + (p + q) / 2.0);
        }
    }
    hu_from_eta(m.eta, m.hu);
    return m;
}

namespace {

std::vector<std::string> build_moment_names() {
    std::vector<std::string> names;
    const char* prefixes[2] = {"", "w"};
    for (const char* pre : prefixes) {
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; q <= 3; ++q)
                names.push_back(std::string(pre) + "m" + std::to_string(p) + std::to_string(q));
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; q <= 3; ++q)
                names.push_back(std::string(pre) + "mu" + std::to_string(p) + std::to_string(q));
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; q <= 3; ++q)
                if (p + q >= 2)
                    names.push_back(std::string(pre) + "eta" + std::to_string(p) +
                                    std::to_string(q));
        for (int k = 1; k <= 7; ++k)
            names.push_back(std::string(pre) + "hu" + std::to_string(k));
    }
    return names;
}

void append_moment_values(const MomentSet& m, std::vector<double>& out) {
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q) out.push_back(m.raw[p][q]);
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q) out.push_back(m.central[p][q]);
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q)
            if (p + q >= 2) out.push_back(m.eta[p][q]);
    for (int k = 0; k < 7; ++k) out.push_back(m.hu[k]);
}

} // namespace

const std::vector<std::string>& moment_feature_names() {
    static const std::vector<std::string> names = build_moment_names();
    return names;
}

std::vector<double> moment_feature_values(const MomentSet& binary, const MomentSet& weighted) {
    std::vector<double> values;
    values.reserve(moment_feature_names().size());
    append_moment_values(binary, values);
    append_moment_values(weighted, values);
    return values;
}

} // namespace featurex
