// Times the serial reference path against the OpenMP path on one synthetic
// workload and prints the speedup table.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "featurex/engine.hpp"
#include "featurex/errors.hpp"
#include "featurex/pgm.hpp"
#include "featurex/synth.hpp"

using namespace featurex;

namespace {

double time_run(ExtractionConfig config, bool parallel, int threads) {
    config.parallel = parallel;
    config.threads = threads;
    double best = 1e30;
    for (int rep = 0; rep < 3; ++rep) {
        const RunSummary s = run(config);
        best = std::min(best, s.elapsed_seconds);
    }
    return best;
}

} // namespace

int main(int argc, char** argv) {
    const int roi_count = argc > 1 ? std::atoi(argv[1]) : 64;
    const int roi_size = argc > 2 ? std::atoi(argv[2]) : 1000;

    SynthSpec spec;
    spec.roi_size = roi_size;
    spec.roi_count = roi_count;
    spec.image_size = 16;
    LabelMask mask;
    for (;;) {
        try {
            mask = blob_mask_grid(spec);
            break;
        } catch (const PackingError&) {
            spec.image_size = spec.image_size * 3 / 2 + 8;
        }
    }
    const IntensityImage star = siemens_star(spec.image_size, spec.spokes);

    const auto dir = std::filesystem::temp_directory_path() / "featurex-parbench";
    std::filesystem::create_directories(dir / "int");
    std::filesystem::create_directories(dir / "seg");
    write_intensity(dir / "int" / "synth.pgm", star);
    write_mask(dir / "seg" / "synth.pgm", mask);

    ExtractionConfig config;
    config.intensity_dir = dir / "int";
    config.mask_dir = dir / "seg";
    config.output_path = dir / "features.csv";

    std::printf("workload: %d ROIs of ~%d px, image %dx%d\n", roi_count, roi_size,
                spec.image_size, spec.image_size);
    std::printf("%-22s %10s %10s %8s\n", "groups", "serial(s)", "omp(s)", "speedup");

    const std::vector<std::vector<std::string>> group_sets = {
        {"intensity", "shape"}, {"glcm"}, {"glrlm", "glszm", "ngtdm"}, {"*ALL*"}};
    const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
    for (const auto& groups : group_sets) {
        config.features = groups;
        const double serial = time_run(config, false, 1);
        const double parallel = time_run(config, true, static_cast<int>(hw));
        std::string tag;
        for (const auto& g : groups) tag += (tag.empty() ? "" : "+") + g;
        std::printf("%-22s %10.4f %10.4f %7.2fx\n", tag.c_str(), serial, parallel,
                    serial / parallel);
    }
    return 0;
}
