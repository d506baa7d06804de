#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

#include "featurex/errors.hpp"
#include "featurex/synth.hpp"

using namespace featurex;

TEST_CASE("two-spoke star splits the plane in half") {
    const IntensityImage img = siemens_star(16, 2);
    // sector 0 covers theta in [0, pi): the lower half-plane (y > center)
    // is high, the upper half low.
    CHECK(img.at(8, 12) == 65535);
    CHECK(img.at(8, 2) == 0);
    size_t high = 0;
    for (uint16_t v : img.pixels) high += v == 65535;
    CHECK(std::abs(static_cast<double>(high) / img.pixels.size() - 0.5) < 0.1);
}

TEST_CASE("star is invariant under a two-sector rotation") {
    // The alternating pattern has period 2 sectors, i.e. 4pi/spokes; for 8
    // spokes that is a lattice-exact 90-degree turn (odd size centers it).
    const IntensityImage img = siemens_star(33, 8);
    const int n = 33;
    const double c = (n - 1) / 2.0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            // skip pixels on a sector boundary, where fp ties break arbitrarily
            double theta = std::atan2(y - c, x - c);
            if (theta < 0) theta += 2 * std::numbers::pi;
            const double sector = 8 * theta / (2 * std::numbers::pi);
            if (std::abs(sector - std::round(sector)) < 1e-9) continue;
            CHECK(img.at(x, y) == img.at(y, n - 1 - x));
        }
    }
}

TEST_CASE("eight-spoke high fraction is one half") {
    const IntensityImage img = siemens_star(100, 8);
    size_t high = 0;
    for (uint16_t v : img.pixels) high += v == 65535;
    const double fraction = static_cast<double>(high) / img.pixels.size();
    CHECK(std::abs(fraction - 0.5) <= 0.02);
}

TEST_CASE("star generation is deterministic") {
    const IntensityImage a = siemens_star(64, 8);
    const IntensityImage b = siemens_star(64, 8);
    CHECK(a.pixels == b.pixels);
}

TEST_CASE("single blob hits the requested area") {
    SynthSpec spec;
    spec.image_size = 128;
    spec.roi_size = 500;
    spec.roi_count = 1;
    spec.seed = 3;
    const LabelMask mask = blob_mask_grid(spec);
    size_t area = 0;
    for (uint16_t v : mask.labels) area += v == 1;
    CHECK(std::abs(static_cast<double>(area) - 500.0) <= 50.0); // within 10%
}

TEST_CASE("four blobs carry distinct labels") {
    SynthSpec spec;
    spec.image_size = 200;
    spec.roi_size = 400;
    spec.roi_count = 4;
    const LabelMask mask = blob_mask_grid(spec);
    std::map<uint16_t, size_t> counts;
    for (uint16_t v : mask.labels)
        if (v) counts[v]++;
    REQUIRE(counts.size() == 4);
    for (const auto& [label, count] : counts) {
        CHECK(label >= 1);
        CHECK(label <= 4);
        CHECK(count > 200);
    }
}

TEST_CASE("infeasible packing raises") {
    SynthSpec spec;
    spec.image_size = 64;
    spec.roi_size = 2000;
    spec.roi_count = 4;
    CHECK_THROWS_AS(blob_mask_grid(spec), PackingError);
}

TEST_CASE("mask generation is deterministic under seed") {
    SynthSpec spec;
    spec.image_size = 150;
    spec.roi_size = 300;
    spec.roi_count = 6;
    spec.seed = 1234;
    const LabelMask a = blob_mask_grid(spec);
    const LabelMask b = blob_mask_grid(spec);
    CHECK(a.labels == b.labels);

    spec.seed = 99; // different orientations, same label set
    const LabelMask c = blob_mask_grid(spec);
    std::set<uint16_t> labels_a, labels_c;
    for (uint16_t v : a.labels)
        if (v) labels_a.insert(v);
    for (uint16_t v : c.labels)
        if (v) labels_c.insert(v);
    CHECK(labels_a == labels_c);
}

TEST_CASE("benchmark produces one row per cell") {
    const auto workdir = std::filesystem::temp_directory_path() / "fx_bench_unit";
    std::filesystem::remove_all(workdir);
    const ScalingReport report =
        scaling_benchmark({200}, {4}, {"intensity"}, 1, workdir, 1);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].roi_size == 200);
    CHECK(report.rows[0].roi_count == 4);
    CHECK(report.rows[0].elapsed_seconds >= 0);
    CHECK(report.rows[0].feature_group == "intensity");

    const auto csv = workdir / "report.csv";
    write_scaling_csv(report, csv);
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "roi_size,roi_count,elapsed_seconds,feature_group");
}

TEST_CASE("more rois cost more time") {
    const auto workdir = std::filesystem::temp_directory_path() / "fx_bench_mono";
    std::filesystem::remove_all(workdir);
    const ScalingReport report =
        scaling_benchmark({400}, {2, 40}, {"intensity", "shape"}, 1, workdir, 3);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[1].elapsed_seconds > report.rows[0].elapsed_seconds * 0.9);
}
