#include "featurex/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "featurex/errors.hpp"
#include "featurex/intensity_features.hpp"
#include "featurex/moments.hpp"
#include "featurex/pgm.hpp"
#include "featurex/shape_features.hpp"

namespace featurex {

namespace {

const std::vector<std::string> kAllGroups = {"intensity", "shape", "moments", "glcm",
                                             "glrlm",     "glszm", "ngtdm"};

// Minimal glob: '*' and '?'.
bool glob_match(const std::string& pattern, const std::string& name) {
    size_t p = 0, n = 0, star = std::string::npos, star_n = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            star_n = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++star_n;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<int> sorted_angles(const GlcmParams& params) {
    std::vector<int> angles = params.angles;
    std::sort(angles.begin(), angles.end());
    return angles;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

TextureParams resolve_profile(const std::string& name) {
    TextureParams t;
    if (name == "default") {
        t.glcm = {64, 1, {0, 45, 90, 135}, true};
        t.histogram_bins = 256;
    } else if (name == "performance") {
        t.glcm = {32, 1, {0}, false};
        t.histogram_bins = 256;
    } else if (name == "ibsi-like") {
        t.glcm = {256, 1, {0, 45, 90, 135}, true};
        t.histogram_bins = 256;
    } else {
        throw UnknownProfile("unknown profile '" + name + "'");
    }
    return t;
}

std::vector<std::string> resolve_feature_groups(const std::vector<std::string>& requested) {
    if (requested.empty()) throw ConfigError("feature list is empty");
    std::set<std::string> picked;
    for (const std::string& r : requested) {
        if (r == "*ALL*") {
            picked.insert(kAllGroups.begin(), kAllGroups.end());
            continue;
        }
        if (std::find(kAllGroups.begin(), kAllGroups.end(), r) == kAllGroups.end())
            throw ConfigError("unknown feature group '" + r + "'");
        picked.insert(r);
    }
    // Canonical group order, not request order.
    std::vector<std::string> groups;
    for (const std::string& g : kAllGroups)
        if (picked.count(g)) groups.push_back(g);
    return groups;
}

std::vector<std::string> feature_columns(const std::vector<std::string>& groups,
                                         const TextureParams& params) {
    std::vector<std::string> cols;
    auto add_per_angle = [&](const std::string& family,
                             const std::vector<std::string>& stats) {
        for (const std::string& stat : stats) {
            for (int angle : sorted_angles(params.glcm))
                cols.push_back(family + "_" + stat + "_" + std::to_string(angle));
            cols.push_back(family + "_" + stat + "_ave");
        }
    };
    for (const std::string& g : groups) {
        if (g == "intensity") {
            for (const auto& n : intensity_feature_names()) cols.push_back("intensity_" + n);
        } else if (g == "shape") {
            for (const auto& n : shape_feature_names()) cols.push_back("shape_" + n);
        } else if (g == "moments") {
            for (const auto& n : moment_feature_names()) cols.push_back("moments_" + n);
        } else if (g == "glcm") {
            add_per_angle("glcm", glcm_feature_names());
        } else if (g == "glrlm") {
            add_per_angle("glrlm", glrlm_feature_names());
        } else if (g == "glszm") {
            for (const auto& n : glszm_feature_names()) cols.push_back("glszm_" + n);
        } else if (g == "ngtdm") {
            for (const auto& n : ngtdm_feature_names()) cols.push_back("ngtdm_" + n);
        }
    }
    return cols;
}

std::vector<double> compute_roi_features(const PixelCloud& cloud,
                                         const std::vector<std::string>& groups,
                                         const TextureParams& params) {
    std::vector<double> out;

    const bool needs_contour =
        std::find(groups.begin(), groups.end(), "intensity") != groups.end() ||
        std::find(groups.begin(), groups.end(), "shape") != groups.end();
    const bool needs_texture = std::any_of(groups.begin(), groups.end(), [](const auto& g) {
        return g == "glcm" || g == "glrlm" || g == "glszm" || g == "ngtdm";
    });

    ContourPath contour;
    ConvexHull hull;
    if (needs_contour) {
        contour = trace_contour(cloud);
        hull = convex_hull(cloud);
    }
    DiscretizedRoi droi;
    if (needs_texture) droi = discretize(cloud, params.glcm.ng);

    auto emit_per_angle = [&](const std::vector<NamedValues>& per_angle) {
        const size_t stats = per_angle.empty() ? 0 : per_angle[0].size();
        for (size_t s = 0; s < stats; ++s) {
            double acc = 0;
            for (const NamedValues& vals : per_angle) {
                out.push_back(vals[s].second);
                acc += vals[s].second;
            }
            out.push_back(acc / static_cast<double>(per_angle.size()));
        }
    };

    for (const std::string& g : groups) {
        if (g == "intensity") {
            const IntensityFeatureSet f =
                intensity_features(cloud, contour, params.histogram_bins);
            const auto v = intensity_feature_values(f);
            out.insert(out.end(), v.begin(), v.end());
        } else if (g == "shape") {
            const ShapeFeatureSet f = shape_features(cloud, contour, hull);
            const auto v = shape_feature_values(f);
            out.insert(out.end(), v.begin(), v.end());
        } else if (g == "moments") {
            const MomentSet binary = compute_moments(cloud, false);
            MomentSet weighted;
            try {
                weighted = compute_moments(cloud, true);
            } catch (const ZeroMassError&) {
                // zero-mass ROI: weighted moments report zeros
            }
            const auto v = moment_feature_values(binary, weighted);
            out.insert(out.end(), v.begin(), v.end());
        } else if (g == "glcm") {
            std::vector<NamedValues> per_angle;
            for (int angle : sorted_angles(params.glcm))
                per_angle.push_back(glcm_features(
                    glcm(droi, params.glcm.offset, angle, params.glcm.symmetric)));
            emit_per_angle(per_angle);
        } else if (g == "glrlm") {
            std::vector<NamedValues> per_angle;
            for (int angle : sorted_angles(params.glcm))
                per_angle.push_back(glrlm_features(glrlm(droi, angle)));
            emit_per_angle(per_angle);
        } else if (g == "glszm") {
            for (const auto& [name, value] : glszm_features(glszm(droi))) out.push_back(value);
        } else if (g == "ngtdm") {
            for (const auto& [name, value] : ngtdm_features(ngtdm(droi))) out.push_back(value);
        }
    }
    return out;
}

size_t write_csv(const std::vector<std::string>& columns, std::vector<FeatureRow> rows,
                 const std::filesystem::path& path) {
    std::sort(rows.begin(), rows.end(), [](const FeatureRow& a, const FeatureRow& b) {
        if (a.image_name != b.image_name) return a.image_name < b.image_name;
        return a.roi_label < b.roi_label;
    });

    std::ofstream out(path, std::ios::binary); // binary: byte-stable line endings
    if (!out) throw IoError("cannot create " + path.string());
    out << "image,mask,label";
    for (const auto& c : columns) out << "," << csv_escape(c);
    out << "\n";
    for (const FeatureRow& r : rows) {
        out << csv_escape(r.image_name) << "," << csv_escape(r.mask_name) << "," << r.roi_label;
        for (double v : r.values) out << "," << format_value(v);
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
    return rows.size();
}

namespace {

struct Pair {
    std::string name;
    std::filesystem::path intensity;
    std::filesystem::path mask;
};

std::vector<Pair> pair_files(const ExtractionConfig& config, int& failures) {
    std::map<std::string, std::filesystem::path> intensity, mask;
    auto scan = [&](const std::filesystem::path& dir,
                    std::map<std::string, std::filesystem::path>& into) {
        if (!std::filesystem::is_directory(dir))
            throw IoError("not a directory: " + dir.string());
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (glob_match(config.file_pattern, name)) into[name] = entry.path();
        }
    };
    scan(config.intensity_dir, intensity);
    scan(config.mask_dir, mask);

    std::vector<Pair> pairs;
    for (const auto& [name, ipath] : intensity) {
        auto it = mask.find(name);
        if (it == mask.end()) {
            std::cerr << "featurex: no mask for image '" << name << "', skipped\n";
            ++failures;
            continue;
        }
        pairs.push_back({name, ipath, it->second});
    }
    for (const auto& [name, mpath] : mask) {
        if (!intensity.count(name)) {
            std::cerr << "featurex: no image for mask '" << name << "', skipped\n";
            ++failures;
        }
    }
    return pairs;
}

std::filesystem::path resolve_spill_dir(const ExtractionConfig& config) {
    if (const char* env = std::getenv("FEATUREX_SPILL_DIR"); env && *env)
        return std::filesystem::path(env);
    if (!config.spill_dir.empty()) return config.spill_dir;
    return std::filesystem::temp_directory_path() / "featurex-spill";
}

} // namespace

RunSummary run(const ExtractionConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();

    if (config.threads < 1) throw ConfigError("threads must be >= 1");
    const std::vector<std::string> groups = resolve_feature_groups(config.features);
    TextureParams params = resolve_profile(config.profile);
    if (config.glcm_override) params.glcm = *config.glcm_override;
    if (config.histogram_bins_override) params.histogram_bins = *config.histogram_bins_override;
    if (config.memory_budget == 0) throw ConfigError("memory budget must be positive");

    RunSummary summary;
    std::vector<Pair> pairs = pair_files(config, summary.failed_pairs);
    const std::vector<std::string> columns = feature_columns(groups, params);
    std::vector<FeatureRow> rows;

    for (const Pair& pair : pairs) {
        try {
            const IntensityImage image = load_intensity(pair.intensity);
            const LabelMask mask = load_mask(pair.mask);
            const auto tiles = iter_row_tiles(image, mask, config.rows_per_tile);

            MemoryBudget budget;
            budget.max_resident_bytes = config.memory_budget;
            budget.spill_dir = resolve_spill_dir(config);
            RoiRegistry registry = RoiRegistry::accumulate(tiles, budget);

            const std::vector<uint32_t> labels = registry.labels();
            std::vector<FeatureRow> pair_rows(labels.size());
            std::string first_error;

            if (config.parallel && config.threads > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(config.threads)
                for (size_t i = 0; i < labels.size(); ++i) {
                    try {
                        const PixelCloud cloud = registry.cloud(labels[i]);
                        pair_rows[i] = {pair.name, pair.name, labels[i],
                                        compute_roi_features(cloud, groups, params)};
                    } catch (const std::exception& e) {
#pragma omp critical
                        if (first_error.empty()) first_error = e.what();
                    }
                }
            } else {
                // Serial reference path; kept bit-compatible with the
                // parallel path and exercised by the determinism tests.
                for (size_t i = 0; i < labels.size(); ++i) {
                    const PixelCloud cloud = registry.cloud(labels[i]);
                    pair_rows[i] = {pair.name, pair.name, labels[i],
                                    compute_roi_features(cloud, groups, params)};
                }
            }
            if (!first_error.empty()) throw IoError(first_error);

            rows.insert(rows.end(), pair_rows.begin(), pair_rows.end());
            summary.rois += labels.size();
            summary.images += 1;
            registry.cleanup();
        } catch (const std::exception& e) {
            std::cerr << "featurex: pair '" << pair.name << "' failed: " << e.what() << "\n";
            summary.failed_pairs += 1;
        }
    }

    summary.rows = write_csv(columns, std::move(rows), config.output_path);
    summary.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return summary;
}

} // namespace featurex
