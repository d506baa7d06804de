#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "featurex/roi.hpp"

namespace featurex {

// Class-separability loss: the class-unbiased between/within variance ratio
//   L = (N-K) * sum_i n_i*(mean_i - mean)^2 / ((K-1) * sum_ij (f_ij - mean_i)^2)
// A zero within-class sum with positive between-class sum yields the +inf
// sentinel; both sums ~0 yield 0.
struct LossValue {
    double value = 0.0;
    bool infinite = false;

    // Strict "better separability" order: infinite beats finite.
    bool better_than(const LossValue& o) const {
        if (infinite != o.infinite) return infinite;
        if (infinite) return false;
        return value > o.value;
    }
};

LossValue separability_loss(const std::vector<double>& values, const std::vector<int>& classes);

// One hyperparameter axis: either a strictly increasing numeric list or a
// chain of nested sets (each set a strict subset of the next).
struct GridComponent {
    std::string name;
    std::vector<double> numeric_values;
    std::vector<std::vector<std::string>> set_chain;

    bool is_set() const { return !set_chain.empty(); }
    size_t size() const { return is_set() ? set_chain.size() : numeric_values.size(); }
};

// Product lattice over the components. Points are index vectors; flat
// enumeration is lexicographic with the first component slowest.
struct ParamGrid {
    std::vector<GridComponent> components;

    size_t point_count() const;
    std::vector<size_t> point(size_t flat) const;
    std::string describe(const std::vector<size_t>& indices) const;
};

// Validates orderings (numeric strictly increasing, set chains nested) and
// throws GridError otherwise.
ParamGrid build_grid(std::vector<GridComponent> components);

// Analytic operation-count model for the GLCM soft feature on a reference
// ROI. The offset axis is a chain (grid value d means offsets 1..d are all
// evaluated), so cost is strictly increasing along every axis:
//   cost(ng, d, A) = sum_{delta=1..d} pairs(delta, A) + c * ng^2 * |A| * d
// where pairs counts in-bbox pixel pairs per angle and c is the per-cell
// feature summation coefficient.
struct GlcmCostModel {
    int roi_width = 64;
    int roi_height = 64;
    double summation_coeff = 8.0;

    double cost(int ng, int max_offset, int n_angles) const;
};

struct CalibrationItem {
    PixelCloud roi;
    int cls = 0; // class label in 1..K
};

struct CalibrationSet {
    std::vector<CalibrationItem> items;

    int class_count() const;
    size_t size() const { return items.size(); }
};

// Stratified uniform sample, deterministic under seed. Per class the sample
// size is clamp(round(fraction*n_i), 2, n_i); classes with fewer than two
// items raise InsufficientClassItems.
CalibrationSet sample_calibration(const CalibrationSet& full, double fraction, uint64_t seed);

// Feature evaluator at one grid point. Returns one or more scalars per ROI;
// for vector results the loss is computed per scalar and averaged.
using SoftFeatureEvaluator =
    std::function<std::vector<double>(const PixelCloud&, const std::vector<size_t>&)>;

using CostFunction = std::function<double(const std::vector<size_t>&)>;

struct GridPointResult {
    std::vector<size_t> indices;
    double cost = 0;
    LossValue loss;
};

struct TuneReport {
    std::vector<GridPointResult> rows; // grid order
    size_t best = 0;                   // index into rows
};

struct TuneOptions {
    std::optional<double> max_cost; // budget; points above it are not evaluated
    int threads = 1;
};

// Evaluates the feature at every grid point within budget on every
// calibration ROI and selects argmax loss; ties break on minimal cost, then
// lexicographic grid order. Throws NoFeasiblePoint when the budget excludes
// the whole grid.
TuneReport tune(const SoftFeatureEvaluator& feature, const ParamGrid& grid,
                const CostFunction& cost, const CalibrationSet& cal,
                const TuneOptions& options = {});

// Report CSV: one row per grid point in grid order; columns are the grid
// components, then "cost", "loss", "is_infinite". The +inf sentinel is
// written as the maximum representable double with is_infinite=1.
void write_tune_report_csv(const TuneReport& report, const ParamGrid& grid,
                           const std::filesystem::path& path);

// GLCM soft feature over grid components named "ng" (numeric), "d" (numeric
// offset-chain bound) and optionally "angles" (set chain of {0,45,90,135}):
// evaluates the named statistic for every offset 1..d and every angle of the
// chain entry and returns the mean. Statistic names follow
// glcm_feature_names().
SoftFeatureEvaluator make_glcm_evaluator(const ParamGrid& grid, const std::string& statistic);

} // namespace featurex
