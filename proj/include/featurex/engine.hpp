#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "featurex/texture.hpp"

namespace featurex {

// Hyperparameter bundle resolved from a profile name.
struct TextureParams {
    GlcmParams glcm;
    int histogram_bins = 256;
};

// Presets: default (ng=64, d=1, 4 angles, symmetric, 256 bins),
// performance (ng=32, d=1, angle 0 only), ibsi-like (ng=256, d=1, 4 angles,
// symmetric). Throws UnknownProfile.
TextureParams resolve_profile(const std::string& name);

struct ExtractionConfig {
    std::filesystem::path intensity_dir;
    std::filesystem::path mask_dir;
    std::string file_pattern = "*.pgm";
    std::vector<std::string> features = {"*ALL*"}; // group names
    std::string profile = "default";
    int threads = 1;
    size_t memory_budget = std::numeric_limits<size_t>::max();
    std::optional<GlcmParams> glcm_override;
    std::optional<int> histogram_bins_override;
    std::filesystem::path output_path;
    std::filesystem::path spill_dir; // FEATUREX_SPILL_DIR env var wins over this
    int rows_per_tile = 256;
    bool parallel = true; // false selects the serial reference path
};

// One output row: one ROI of one image pair.
struct FeatureRow {
    std::string image_name;
    std::string mask_name;
    uint32_t roi_label = 0;
    std::vector<double> values;
};

struct RunSummary {
    int images = 0;
    size_t rois = 0;
    size_t rows = 0;
    double elapsed_seconds = 0;
    int failed_pairs = 0;

    bool completed_with_errors() const { return failed_pairs > 0; }
};

// Valid feature group names: intensity, shape, moments, glcm, glrlm, glszm,
// ngtdm, *ALL*. Throws ConfigError on unknown names.
std::vector<std::string> resolve_feature_groups(const std::vector<std::string>& requested);

// Column names for the given groups/params, in canonical order (metadata
// columns image, mask, label excluded).
std::vector<std::string> feature_columns(const std::vector<std::string>& groups,
                                         const TextureParams& params);

// Computes the selected features of one ROI in feature_columns order.
std::vector<double> compute_roi_features(const PixelCloud& cloud,
                                         const std::vector<std::string>& groups,
                                         const TextureParams& params);

// Pairs files by identical basename across the two directories, accumulates
// ROIs per pair under the memory budget, computes features (OpenMP across
// ROIs unless config.parallel is false), and writes one deterministic CSV:
// header first, rows sorted by (image_name, roi_label), reals with 10
// significant digits. Failing pairs are logged and skipped.
RunSummary run(const ExtractionConfig& config);

// RFC-4180-style writer used by run(); exposed for tests.
size_t write_csv(const std::vector<std::string>& columns, std::vector<FeatureRow> rows,
                 const std::filesystem::path& path);

} // namespace featurex
