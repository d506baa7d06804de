#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "featurex/image.hpp"

namespace featurex {

struct SynthSpec {
    int image_size = 0;  // square
    int roi_size = 0;    // approximate blob area in pixels
    int roi_count = 0;
    int spokes = 8;      // Siemens-star spoke count, even
    uint64_t seed = 0;
};

// Siemens-star calibration pattern: pixel value 65535 when
// floor(spokes * theta / 2pi) is even, else 0 (theta about image center).
IntensityImage siemens_star(int size, int spokes);

// roi_count disk-with-ears blobs of ~roi_size pixels each on a regular grid,
// labels 1..roi_count, non-overlapping. Blob orientation is seeded per blob.
// Throws PackingError when the grid cannot fit.
LabelMask blob_mask_grid(const SynthSpec& spec);

struct BenchCell {
    int roi_size = 0;
    int roi_count = 0;
    double elapsed_seconds = 0;
    std::string feature_group;
};

struct ScalingReport {
    std::vector<BenchCell> rows;
};

// Generates a synthetic pair per (roi_size, roi_count) cell under workdir,
// times the extraction engine (median of `repeats` runs on a monotonic
// clock) and records one report row per cell. Cells run sequentially.
ScalingReport scaling_benchmark(const std::vector<int>& roi_sizes,
                                const std::vector<int>& roi_counts,
                                const std::vector<std::string>& feature_groups, int threads,
                                const std::filesystem::path& workdir, int repeats = 3,
                                uint64_t seed = 0);

// CSV with columns roi_size, roi_count, elapsed_seconds, feature_group.
void write_scaling_csv(const ScalingReport& report, const std::filesystem::path& path);

} // namespace featurex
