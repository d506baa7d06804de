#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "featurex/contour.hpp"
#include "featurex/errors.hpp"
#include "featurex/intensity_features.hpp"
#include "test_support.hpp"

using namespace featurex;
using namespace featurex::testing;

namespace {

PixelCloud line_cloud(const std::vector<int>& values) {
    std::vector<Pixel> pixels;
    for (size_t i = 0; i < values.size(); ++i)
        pixels.push_back({static_cast<uint32_t>(i), 0, static_cast<uint16_t>(values[i])});
    return make_cloud(std::move(pixels));
}

IntensityFeatureSet feats(const PixelCloud& cloud, int bins = 256) {
    return intensity_features(cloud, trace_contour(cloud), bins);
}

} // namespace

TEST_CASE("constant ROI degenerates cleanly") {
    const auto f = feats(line_cloud({5, 5, 5, 5}));
    CHECK(f.mean == doctest::Approx(5));
    CHECK(f.variance == 0);
    CHECK(f.std_dev == 0);
    CHECK(f.entropy == 0);
    CHECK(f.uniformity == doctest::Approx(1));
    CHECK(f.energy == doctest::Approx(100));
    CHECK(f.range == 0);
    CHECK(f.skewness == 0); // degenerate ratio rule
    CHECK(f.kurtosis == 0);
    CHECK(f.mode == 5);
}

TEST_CASE("0..3 ROI against the sorted-array oracle") {
    const auto f = feats(line_cloud({0, 1, 2, 3}));
    CHECK(f.mean == doctest::Approx(1.5));
    CHECK(f.variance_biased == doctest::Approx(1.25));
    CHECK(f.median == doctest::Approx(1.5));
    CHECK(f.iqr == doctest::Approx(1.5)); // p75=2.25, p25=0.75, linear ranks
    CHECK(f.p25 == doctest::Approx(0.75));
    CHECK(f.p75 == doctest::Approx(2.25));
    CHECK(f.energy == doctest::Approx(14));
}

TEST_CASE("two values over two bins") {
    const auto f = feats(line_cloud({2, 4}), 2);
    CHECK(f.entropy == doctest::Approx(1.0)); // bits
    CHECK(f.uniformity == doctest::Approx(0.5));
}

TEST_CASE("weighted centroid") {
    SUBCASE("single pixel is its own centroid") {
        const auto [x, y] = weighted_centroid(make_cloud({{3, 4, 9}}));
        CHECK(x == doctest::Approx(3));
        CHECK(y == doctest::Approx(4));
    }
    SUBCASE("equal masses average") {
        const auto [x, y] = weighted_centroid(make_cloud({{0, 0, 1}, {2, 0, 1}}));
        CHECK(x == doctest::Approx(1));
        CHECK(y == doctest::Approx(0));
    }
    SUBCASE("unequal masses pull the centroid") {
        const auto [x, y] = weighted_centroid(make_cloud({{0, 0, 1}, {2, 0, 3}}));
        CHECK(x == doctest::Approx(1.5));
        CHECK(y == doctest::Approx(0));
    }
    SUBCASE("zero mass raises") {
        CHECK_THROWS_AS(weighted_centroid(make_cloud({{0, 0, 0}})), ZeroMassError);
    }
}

TEST_CASE("shift covariance over random ROIs") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const PixelCloud cloud = random_blob(rng, 40, 100, 900);
        PixelCloud shifted = cloud;
        const uint16_t c = 137;
        for (Pixel& p : shifted.pixels) p.intensity = static_cast<uint16_t>(p.intensity + c);

        const auto a = feats(cloud);
        const auto b = feats(shifted);
        CHECK(b.mean == doctest::Approx(a.mean + c).epsilon(1e-9));
        CHECK(b.median == doctest::Approx(a.median + c).epsilon(1e-9));
        CHECK(b.p10 == doctest::Approx(a.p10 + c).epsilon(1e-9));
        CHECK(b.p90 == doctest::Approx(a.p90 + c).epsilon(1e-9));
        CHECK(b.variance == doctest::Approx(a.variance).epsilon(1e-9));
        CHECK(b.std_dev == doctest::Approx(a.std_dev).epsilon(1e-9));
        CHECK(b.mad == doctest::Approx(a.mad).epsilon(1e-9));
        CHECK(b.iqr == doctest::Approx(a.iqr).epsilon(1e-9));
        if (a.variance_biased > 0) {
            CHECK(b.skewness == doctest::Approx(a.skewness).epsilon(1e-9));
            CHECK(b.kurtosis == doctest::Approx(a.kurtosis).epsilon(1e-9));
        }
    }
}

TEST_CASE("scale covariance over random ROIs") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const PixelCloud cloud = random_blob(rng, 40, 10, 500);
        PixelCloud scaled = cloud;
        const int a_factor = 3;
        for (Pixel& p : scaled.pixels) p.intensity = static_cast<uint16_t>(p.intensity * a_factor);

        const auto a = feats(cloud);
        const auto b = feats(scaled);
        CHECK(b.std_dev == doctest::Approx(a.std_dev * a_factor).epsilon(1e-9));
        if (a.variance_biased > 0) {
            CHECK(b.skewness == doctest::Approx(a.skewness).epsilon(1e-9));
            CHECK(b.kurtosis == doctest::Approx(a.kurtosis).epsilon(1e-9));
            CHECK(b.cov == doctest::Approx(a.cov).epsilon(1e-9));
        }
    }
}

TEST_CASE("percentiles are ordered") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const PixelCloud cloud = random_blob(rng, 30);
        const auto f = feats(cloud);
        CHECK(f.min <= f.p1);
        CHECK(f.p1 <= f.p10);
        CHECK(f.p10 <= f.p25);
        CHECK(f.p25 <= f.p75);
        CHECK(f.p75 <= f.p90);
        CHECK(f.p90 <= f.p99);
        CHECK(f.p99 <= f.max);
        CHECK(f.range == doctest::Approx(f.max - f.min));
        CHECK(f.iqr == doctest::Approx(f.p75 - f.p25));
    }
}

TEST_CASE("edge stats equal full stats on a one-pixel-thick ring") {
    std::vector<Pixel> pixels;
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> value(1, 999);
    for (int i = 0; i < 6; ++i) {
        pixels.push_back({static_cast<uint32_t>(i), 0, static_cast<uint16_t>(value(rng))});
        pixels.push_back({static_cast<uint32_t>(i), 5, static_cast<uint16_t>(value(rng))});
    }
    for (int i = 1; i < 5; ++i) {
        pixels.push_back({0, static_cast<uint32_t>(i), static_cast<uint16_t>(value(rng))});
        pixels.push_back({5, static_cast<uint32_t>(i), static_cast<uint16_t>(value(rng))});
    }
    const PixelCloud ring = make_cloud(pixels);
    const auto f = feats(ring);
    CHECK(f.edge_mean == doctest::Approx(f.mean).epsilon(1e-12));
    CHECK(f.edge_min == doctest::Approx(f.min));
    CHECK(f.edge_max == doctest::Approx(f.max));
    CHECK(f.edge_std == doctest::Approx(f.std_biased).epsilon(1e-12));
    CHECK(f.edge_integrated == doctest::Approx(f.integrated_intensity).epsilon(1e-12));
}
