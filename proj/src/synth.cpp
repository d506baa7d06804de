#include "featurex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "featurex/engine.hpp"
#include "featurex/errors.hpp"
#include "featurex/pgm.hpp"

#include <fstream>

namespace featurex {

IntensityImage siemens_star(int size, int spokes) {
    if (size < 1) throw ConfigError("star size must be >= 1");
    if (spokes < 2 || spokes % 2 != 0) throw ConfigError("spoke count must be even and >= 2");

    IntensityImage img;
    img.width = size;
    img.height = size;
    img.bit_depth = 16;
    img.pixels.resize(static_cast<size_t>(size) * size);

    const double cx = (size - 1) / 2.0, cy = (size - 1) / 2.0;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            double theta = std::atan2(static_cast<double>(y) - cy, static_cast<double>(x) - cx);
            if (theta < 0) theta += two_pi;
            const int sector = static_cast<int>(spokes * theta / two_pi);
            img.pixels[static_cast<size_t>(y) * size + x] = (sector % 2 == 0) ? 65535 : 0;
        }
    }
    return img;
}

namespace {

// Disk with two triangular ears; the silhouette is rasterized at rotation
// `phi` and scaled by `r` (disk radius in pixels).
int rasterize_blob(std::vector<uint16_t>& labels, int size, double cx, double cy, double r,
                   double phi, uint16_t label) {
    const int reach = static_cast<int>(std::ceil(r * 1.9)) + 1;
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    int painted = 0;
    for (int y = std::max(0, static_cast<int>(cy) - reach);
         y <= std::min(size - 1, static_cast<int>(cy) + reach); ++y) {
        for (int x = std::max(0, static_cast<int>(cx) - reach);
             x <= std::min(size - 1, static_cast<int>(cx) + reach); ++x) {
            // Blob-local frame, un-rotated.
            const double dx = x - cx, dy = y - cy;
            const double u = dx * cphi + dy * sphi;
            const double v = -dx * sphi + dy * cphi;
            bool inside = u * u + v * v <= r * r;
            if (!inside) {
                // Ears: triangles above the head at +-45 degrees, apex at 1.8r.
                for (int sgn : {-1, 1}) {
                    const double ex = sgn * r * 0.62;  // ear base center
                    const double ey = -r * 0.62;
                    const double du = u - ex, dv = v - ey;
                    // Triangle pointing outward along (sgn, -1)/sqrt2.
                    const double axis = (sgn * du - dv) / std::numbers::sqrt2;
                    const double off = std::abs((sgn * du + dv) / std::numbers::sqrt2);
                    const double height = r * 0.95;
                    if (axis >= 0 && axis <= height &&
                        off <= 0.55 * r * (1.0 - axis / height)) {
                        inside = true;
                        break;
                    }
                }
            }
            if (inside) {
                labels[static_cast<size_t>(y) * size + x] = label;
                ++painted;
            }
        }
    }
    return painted;
}

// Pixel area of the blob at radius r (probe rasterization off-image).
int blob_area_at(double r, double phi) {
    const int size = static_cast<int>(std::ceil(r * 4)) + 8;
    std::vector<uint16_t> probe(static_cast<size_t>(size) * size, 0);
    return rasterize_blob(probe, size, size / 2.0, size / 2.0, r, phi, 1);
}

} // namespace

LabelMask blob_mask_grid(const SynthSpec& spec) {
    if (spec.image_size < 16) throw PackingError("image size must be >= 16");
    if (spec.roi_count < 1 || spec.roi_size < 1) throw PackingError("empty synth spec");
    if (spec.roi_count > 65535) throw PackingError("too many ROIs for 16-bit labels");
    const double capacity = 0.9 * static_cast<double>(spec.image_size) * spec.image_size;
    if (static_cast<double>(spec.roi_count) * spec.roi_size > capacity)
        throw PackingError("roi_count * roi_size exceeds image capacity");

    // Binary-search the disk radius to hit the requested blob area.
    double lo = 0.5, hi = std::sqrt(static_cast<double>(spec.roi_size));
    while (blob_area_at(hi, 0.0) < spec.roi_size) hi *= 1.5;
    for (int it = 0; it < 40; ++it) {
        const double mid = (lo + hi) / 2.0;
        if (blob_area_at(mid, 0.0) < spec.roi_size)
            lo = mid;
        else
            hi = mid;
    }
    const double r = (lo + hi) / 2.0;

    const int cell = static_cast<int>(std::ceil(2.0 * 1.9 * r)) + 4;
    const int grid_dim = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.roi_count))));
    if (grid_dim * cell > spec.image_size)
        throw PackingError("blob grid does not fit the image");

    LabelMask mask;
    mask.width = spec.image_size;
    mask.height = spec.image_size;
    mask.labels.assign(static_cast<size_t>(spec.image_size) * spec.image_size, 0);

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> rot(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < spec.roi_count; ++i) {
        const int gx = i % grid_dim, gy = i / grid_dim;
        const double cx = gx * cell + cell / 2.0;
        const double cy = gy * cell + cell / 2.0;
        rasterize_blob(mask.labels, spec.image_size, cx, cy, r, rot(rng),
                       static_cast<uint16_t>(i + 1));
    }
    return mask;
}

namespace {

double time_extraction(const std::filesystem::path& int_dir,
                       const std::filesystem::path& seg_dir,
                       const std::filesystem::path& out_csv,
                       const std::vector<std::string>& groups, int threads, int repeats) {
    std::vector<double> samples;
    for (int rep = 0; rep < repeats; ++rep) {
        ExtractionConfig config;
        config.intensity_dir = int_dir;
        config.mask_dir = seg_dir;
        config.features = groups;
        config.threads = threads;
        config.output_path = out_csv;
        const RunSummary s = run(config);
        samples.push_back(s.elapsed_seconds);
    }
    std::sort(samples.begin(), samples.end());
    return samples[samples.size() / 2];
}

} // namespace

ScalingReport scaling_benchmark(const std::vector<int>& roi_sizes,
                                const std::vector<int>& roi_counts,
                                const std::vector<std::string>& feature_groups, int threads,
                                const std::filesystem::path& workdir, int repeats,
                                uint64_t seed) {
    if (roi_sizes.empty() || roi_counts.empty()) throw ConfigError("empty benchmark sweep");
    std::string group_tag;
    for (const auto& g : feature_groups) group_tag += (group_tag.empty() ? "" : ";") + g;

    ScalingReport report;
    for (int roi_size : roi_sizes) {
        for (int roi_count : roi_counts) {
            SynthSpec spec;
            spec.roi_size = roi_size;
            spec.roi_count = roi_count;
            spec.seed = seed;
            // Grow the canvas until the blob grid packs.
            spec.image_size = std::max(
                16, static_cast<int>(std::ceil(std::sqrt(roi_count * roi_size / 0.2))));
            LabelMask mask;
            for (;;) {
                try {
                    mask = blob_mask_grid(spec);
                    break;
                } catch (const PackingError&) {
                    spec.image_size = spec.image_size * 3 / 2;
                    if (spec.image_size > 1 << 16) throw;
                }
            }
            const IntensityImage star = siemens_star(spec.image_size, spec.spokes);

            const auto cell_dir = workdir / ("cell_" + std::to_string(roi_size) + "_" +
                                             std::to_string(roi_count));
            std::filesystem::create_directories(cell_dir / "int");
            std::filesystem::create_directories(cell_dir / "seg");
            write_intensity(cell_dir / "int" / "synth.pgm", star);
            write_mask(cell_dir / "seg" / "synth.pgm", mask);

            BenchCell cell;
            cell.roi_size = roi_size;
            cell.roi_count = roi_count;
            cell.feature_group = group_tag;
            cell.elapsed_seconds =
                time_extraction(cell_dir / "int", cell_dir / "seg", cell_dir / "features.csv",
                                feature_groups, threads, repeats);
            report.rows.push_back(cell);
        }
    }
    return report;
}

void write_scaling_csv(const ScalingReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot create " + path.string());
    out << "roi_size,roi_count,elapsed_seconds,feature_group\n";
    char buf[40];
    for (const BenchCell& c : report.rows) {
        std::snprintf(buf, sizeof buf, "%.10g", c.elapsed_seconds);
        out << c.roi_size << "," << c.roi_count << "," << buf << "," << c.feature_group << "\n";
    }
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace featurex
