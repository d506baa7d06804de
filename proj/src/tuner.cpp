#include "featurex/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "featurex/errors.hpp"
#include "featurex/texture.hpp"

namespace featurex {

LossValue separability_loss(const std::vector<double>& values, const std::vector<int>& classes) {
    if (values.size() != classes.size())
        throw ShapeError("value count does not match item count");

    std::map<int, std::pair<double, size_t>> sums; // class -> (sum, n)
    for (size_t i = 0; i < values.size(); ++i) {
        auto& s = sums[classes[i]];
        s.first += values[i];
        s.second += 1;
    }
    const size_t k = sums.size();
    const size_t n = values.size();
    if (k < 2) throw ClassCountError("separability loss requires at least two classes");

    double grand = 0;
    for (const auto& [cls, s] : sums) grand += s.first;
    grand /= static_cast<double>(n);

    double between = 0;
    for (const auto& [cls, s] : sums) {
        const double mean_i = s.first / static_cast<double>(s.second);
        between += static_cast<double>(s.second) * (mean_i - grand) * (mean_i - grand);
    }
    double within = 0;
    for (size_t i = 0; i < values.size(); ++i) {
        const auto& s = sums.at(classes[i]);
        const double mean_i = s.first / static_cast<double>(s.second);
        within += (values[i] - mean_i) * (values[i] - mean_i);
    }

    LossValue loss;
    if (within < 1e-12) {
        if (between > 1e-12) {
            loss.value = std::numeric_limits<double>::max();
            loss.infinite = true;
        }
        return loss;
    }
    loss.value = (static_cast<double>(n) - k) * between /
                 ((static_cast<double>(k) - 1.0) * within);
    return loss;
}

size_t ParamGrid::point_count() const {
    size_t count = 1;
    for (const auto& c : components) count *= c.size();
    return count;
}

std::vector<size_t> ParamGrid::point(size_t flat) const {
    std::vector<size_t> idx(components.size(), 0);
    for (size_t c = components.size(); c-- > 0;) {
        idx[c] = flat % components[c].size();
        flat /= components[c].size();
    }
    return idx;
}

std::string ParamGrid::describe(const std::vector<size_t>& indices) const {
    std::string out;
    for (size_t c = 0; c < components.size(); ++c) {
        if (!out.empty()) out += " ";
        const auto& comp = components[c];
        out += comp.name + "=";
        if (comp.is_set()) {
            out += "{";
            const auto& set = comp.set_chain[indices[c]];
            for (size_t i = 0; i < set.size(); ++i) out += (i ? "," : "") + set[i];
            out += "}";
        } else {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%g", comp.numeric_values[indices[c]]);
            out += buf;
        }
    }
    return out;
}

ParamGrid build_grid(std::vector<GridComponent> components) {
    for (const auto& c : components) {
        if (c.is_set()) {
            if (!c.numeric_values.empty())
                throw GridError("component '" + c.name + "' mixes numeric and set domains");
            for (size_t i = 0; i + 1 < c.set_chain.size(); ++i) {
                const std::set<std::string> cur(c.set_chain[i].begin(), c.set_chain[i].end());
                const std::set<std::string> next(c.set_chain[i + 1].begin(),
                                                 c.set_chain[i + 1].end());
                if (cur.size() >= next.size() ||
                    !std::includes(next.begin(), next.end(), cur.begin(), cur.end()))
                    throw GridError("component '" + c.name + "' is not a nested set chain");
            }
            if (c.set_chain.empty())
                throw GridError("component '" + c.name + "' has no values");
        } else {
            if (c.numeric_values.empty())
                throw GridError("component '" + c.name + "' has no values");
            for (size_t i = 0; i + 1 < c.numeric_values.size(); ++i)
                if (!(c.numeric_values[i] < c.numeric_values[i + 1]))
                    throw GridError("component '" + c.name + "' is not strictly increasing");
        }
    }
    if (components.empty()) throw GridError("grid has no components");
    return ParamGrid{std::move(components)};
}

double GlcmCostModel::cost(int ng, int max_offset, int n_angles) const {
    // Pixel pairs per angle at offset delta, accumulated over the offset
    // chain 1..max_offset.
    double pairs = 0;
    const double w = roi_width, h = roi_height;
    for (int delta = 1; delta <= max_offset; ++delta) {
        const double horiz = std::max(0.0, w - delta) * h;        // 0 degrees
        const double vert = w * std::max(0.0, h - delta);         // 90
        const double diag = std::max(0.0, w - delta) * std::max(0.0, h - delta); // 45 / 135
        const double per_angle[4] = {horiz, diag, vert, diag};
        for (int a = 0; a < n_angles && a < 4; ++a) pairs += per_angle[a];
    }
    return pairs + summation_coeff * static_cast<double>(ng) * ng * n_angles * max_offset;
}

int CalibrationSet::class_count() const {
    std::set<int> classes;
    for (const auto& item : items) classes.insert(item.cls);
    return static_cast<int>(classes.size());
}

CalibrationSet sample_calibration(const CalibrationSet& full, double fraction, uint64_t seed) {
    if (fraction <= 0.0 || fraction > 1.0)
        throw ConfigError("calibration fraction must be in (0, 1]");

    std::map<int, std::vector<size_t>> by_class;
    for (size_t i = 0; i < full.items.size(); ++i) by_class[full.items[i].cls].push_back(i);

    std::vector<size_t> chosen;
    for (auto& [cls, idx] : by_class) {
        if (idx.size() < 2)
            throw InsufficientClassItems("class " + std::to_string(cls) +
                                         " has fewer than two items");
        size_t want = static_cast<size_t>(std::llround(fraction * static_cast<double>(idx.size())));
        want = std::clamp<size_t>(want, 2, idx.size());
        // Deterministic partial Fisher-Yates, seeded per class.
        std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(cls + 1)));
        for (size_t i = 0; i < want; ++i) {
            const size_t j = i + static_cast<size_t>(rng() % (idx.size() - i));
            std::swap(idx[i], idx[j]);
        }
        chosen.insert(chosen.end(), idx.begin(), idx.begin() + static_cast<ptrdiff_t>(want));
    }
    std::sort(chosen.begin(), chosen.end());

    CalibrationSet sample;
    sample.items.reserve(chosen.size());
    for (size_t i : chosen) sample.items.push_back(full.items[i]);
    return sample;
}

TuneReport tune(const SoftFeatureEvaluator& feature, const ParamGrid& grid,
                const CostFunction& cost, const CalibrationSet& cal,
                const TuneOptions& options) {
    if (grid.point_count() == 0) throw GridError("empty grid");
    if (cal.class_count() < 2) throw ClassCountError("calibration set needs K >= 2 classes");

    std::vector<int> classes;
    classes.reserve(cal.items.size());
    for (const auto& item : cal.items) classes.push_back(item.cls);

    // Feasible points in grid order.
    std::vector<GridPointResult> rows;
    for (size_t flat = 0; flat < grid.point_count(); ++flat) {
        GridPointResult r;
        r.indices = grid.point(flat);
        r.cost = cost(r.indices);
        if (options.max_cost && r.cost > *options.max_cost) continue;
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw NoFeasiblePoint("budget excludes every grid point");

    const int threads = std::max(1, options.threads);
    std::string first_error;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (size_t p = 0; p < rows.size(); ++p) {
        try {
            GridPointResult& r = rows[p];
            // Per-item feature values; vector results are split into scalars.
            std::vector<std::vector<double>> per_scalar;
            for (size_t i = 0; i < cal.items.size(); ++i) {
                const std::vector<double> v = feature(cal.items[i].roi, r.indices);
                if (per_scalar.empty()) per_scalar.resize(v.size());
                if (v.size() != per_scalar.size())
                    throw ShapeError("evaluator returned inconsistent value counts");
                for (size_t s = 0; s < v.size(); ++s) per_scalar[s].push_back(v[s]);
            }
            // Mean loss across scalars; any infinite scalar makes the point infinite.
            double acc = 0;
            bool any_inf = false;
            for (const auto& vals : per_scalar) {
                const LossValue l = separability_loss(vals, classes);
                if (l.infinite)
                    any_inf = true;
                else
                    acc += l.value;
            }
            if (any_inf) {
                r.loss.value = std::numeric_limits<double>::max();
                r.loss.infinite = true;
            } else {
                r.loss.value =
                    per_scalar.empty() ? 0.0 : acc / static_cast<double>(per_scalar.size());
            }
        } catch (const std::exception& e) {
            // Exceptions must not escape the parallel region.
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!first_error.empty()) throw ShapeError(first_error);

    TuneReport report;
    report.rows = std::move(rows);
    report.best = 0;
    for (size_t i = 1; i < report.rows.size(); ++i) {
        const GridPointResult& cand = report.rows[i];
        const GridPointResult& best = report.rows[report.best];
        if (cand.loss.better_than(best.loss)) {
            report.best = i;
        } else if (!best.loss.better_than(cand.loss) && cand.cost < best.cost) {
            // Equal loss: lower cost wins; grid order settles exact ties.
            report.best = i;
        }
    }
    return report;
}

void write_tune_report_csv(const TuneReport& report, const ParamGrid& grid,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path.string());
    for (const auto& c : grid.components) out << c.name << ",";
    out << "cost,loss,is_infinite\n";
    char buf[64];
    for (const GridPointResult& r : report.rows) {
        for (size_t c = 0; c < grid.components.size(); ++c) {
            const auto& comp = grid.components[c];
            if (comp.is_set()) {
                // Sets are reported by their chain size.
                out << comp.set_chain[r.indices[c]].size();
            } else {
                std::snprintf(buf, sizeof buf, "%.10g", comp.numeric_values[r.indices[c]]);
                out << buf;
            }
            out << ",";
        }
        std::snprintf(buf, sizeof buf, "%.10g", r.cost);
        out << buf << ",";
        std::snprintf(buf, sizeof buf, "%.10g", r.loss.value);
        out << buf << "," << (r.loss.infinite ? 1 : 0) << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

SoftFeatureEvaluator make_glcm_evaluator(const ParamGrid& grid, const std::string& statistic) {
    const auto& names = glcm_feature_names();
    const auto stat_it = std::find(names.begin(), names.end(), statistic);
    if (stat_it == names.end())
        throw ConfigError("unknown GLCM statistic '" + statistic + "'");
    const size_t stat_index = static_cast<size_t>(stat_it - names.begin());

    int ng_comp = -1, d_comp = -1, angle_comp = -1;
    for (size_t c = 0; c < grid.components.size(); ++c) {
        const auto& comp = grid.components[c];
        if (comp.name == "ng")
            ng_comp = static_cast<int>(c);
        else if (comp.name == "d")
            d_comp = static_cast<int>(c);
        else if (comp.name == "angles")
            angle_comp = static_cast<int>(c);
        else
            throw ConfigError("GLCM grid component '" + comp.name + "' not recognized");
    }
    if (ng_comp < 0) throw ConfigError("GLCM grid needs an 'ng' component");

    ParamGrid g = grid; // the evaluator owns a copy
    return [g, stat_index, ng_comp, d_comp, angle_comp](
               const PixelCloud& cloud, const std::vector<size_t>& indices) {
        const int ng =
            static_cast<int>(g.components[ng_comp].numeric_values[indices[ng_comp]]);
        const int d = d_comp >= 0 ? static_cast<int>(
                                        g.components[d_comp].numeric_values[indices[d_comp]])
                                  : 1;
        std::vector<int> angles = {0};
        if (angle_comp >= 0) {
            angles.clear();
            for (const std::string& a : g.components[angle_comp].set_chain[indices[angle_comp]])
                angles.push_back(std::stoi(a));
        }
        const DiscretizedRoi roi = discretize(cloud, ng);
        double acc = 0;
        int n = 0;
        for (int delta = 1; delta <= d; ++delta) {
            for (int angle : angles) {
                const GlcmMatrix m = glcm(roi, delta, angle, true);
                acc += glcm_features(m)[stat_index].second;
                ++n;
            }
        }
        return std::vector<double>{n > 0 ? acc / n : 0.0};
    };
}

} // namespace featurex
