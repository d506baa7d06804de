#include <CLI11.hpp>

#include <iostream>
#include <sstream>

#include "featurex/engine.hpp"
#include "featurex/errors.hpp"
#include "featurex/pgm.hpp"
#include "featurex/synth.hpp"
#include "featurex/tuner.hpp"

using namespace featurex;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_numbers(const std::string& s) {
    std::vector<double> out;
    for (const std::string& tok : split(s, ',')) out.push_back(std::stod(tok));
    return out;
}

// Grid spec grammar: "ng=2,4,8;d=1,2;angles=1,4". The angles list gives
// chain sizes, i.e. prefixes of [0,45,90,135].
ParamGrid parse_grid_spec(const std::string& spec) {
    std::vector<GridComponent> comps;
    static const std::vector<std::string> all_angles = {"0", "45", "90", "135"};
    for (const std::string& part : split(spec, ';')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw ConfigError("bad grid component '" + part + "'");
        GridComponent c;
        c.name = part.substr(0, eq);
        const std::string values = part.substr(eq + 1);
        if (c.name == "angles") {
            for (double n : parse_numbers(values)) {
                const auto size = static_cast<size_t>(n);
                if (size < 1 || size > 4)
                    throw ConfigError("angle chain size must be in 1..4");
                c.set_chain.push_back(
                    std::vector<std::string>(all_angles.begin(), all_angles.begin() + size));
            }
        } else {
            c.numeric_values = parse_numbers(values);
        }
        comps.push_back(std::move(c));
    }
    return build_grid(std::move(comps));
}

// Calibration classes CSV: header "image,label,class", one row per ROI.
std::map<std::pair<std::string, uint32_t>, int> parse_classes_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::map<std::pair<std::string, uint32_t>, int> classes;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 3) throw FormatError("bad class row '" + line + "'");
        classes[{cols[0], static_cast<uint32_t>(std::stoul(cols[1]))}] = std::stoi(cols[2]);
    }
    return classes;
}

int run_extract(const ExtractionConfig& config) {
    const RunSummary s = run(config);
    std::cout << "images " << s.images << ", rois " << s.rois << ", rows " << s.rows
              << ", elapsed " << s.elapsed_seconds << " s";
    if (s.failed_pairs > 0) std::cout << ", failed pairs " << s.failed_pairs;
    std::cout << "\n";
    return s.completed_with_errors() ? 1 : 0;
}

int run_tune(const std::string& cal_dir, const std::string& classes_csv,
             const std::string& grid_spec, const std::string& statistic, double fraction,
             uint64_t seed, int threads, double budget, const std::string& out) {
    const ParamGrid grid = parse_grid_spec(grid_spec);
    const auto classes = parse_classes_csv(classes_csv);

    // ROIs come from int/ + seg/ subdirectories paired by basename.
    CalibrationSet full;
    const std::filesystem::path base(cal_dir);
    for (const auto& entry : std::filesystem::directory_iterator(base / "int")) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        const auto seg = base / "seg" / name;
        if (!std::filesystem::exists(seg)) throw PairingError("no mask for " + name);
        const IntensityImage image = load_intensity(entry.path());
        const LabelMask mask = load_mask(seg);
        RoiRegistry reg = RoiRegistry::accumulate(iter_row_tiles(image, mask), {});
        for (uint32_t label : reg.labels()) {
            const auto it = classes.find({name, label});
            if (it == classes.end()) continue;
            full.items.push_back({reg.cloud(label), it->second});
        }
    }
    if (full.items.empty()) throw ConfigError("calibration set is empty");

    const CalibrationSet cal = fraction < 1.0 ? sample_calibration(full, fraction, seed) : full;
    GlcmCostModel cost_model;
    TuneOptions options;
    options.threads = threads;
    if (budget > 0) options.max_cost = budget;

    int ng_comp = -1, d_comp = -1, angle_comp = -1;
    for (size_t c = 0; c < grid.components.size(); ++c) {
        if (grid.components[c].name == "ng") ng_comp = static_cast<int>(c);
        if (grid.components[c].name == "d") d_comp = static_cast<int>(c);
        if (grid.components[c].name == "angles") angle_comp = static_cast<int>(c);
    }
    const CostFunction cost = [&](const std::vector<size_t>& idx) {
        const int ng = ng_comp >= 0
                           ? static_cast<int>(grid.components[ng_comp].numeric_values[idx[ng_comp]])
                           : 2;
        const int d =
            d_comp >= 0 ? static_cast<int>(grid.components[d_comp].numeric_values[idx[d_comp]])
                        : 1;
        const int na = angle_comp >= 0
                           ? static_cast<int>(grid.components[angle_comp].set_chain[idx[angle_comp]].size())
                           : 1;
        return cost_model.cost(ng, d, na);
    };

    const TuneReport report = tune(make_glcm_evaluator(grid, statistic), grid, cost, cal, options);
    write_tune_report_csv(report, grid, out);

    const GridPointResult& best = report.rows[report.best];
    std::cout << "best point: " << grid.describe(best.indices) << " (cost " << best.cost
              << ", loss " << (best.loss.infinite ? std::string("inf")
                                                  : std::to_string(best.loss.value))
              << ")\n"
              << "report: " << out << " (" << report.rows.size() << " rows)\n";
    return 0;
}

int run_synth(int size, int roi_size, int roi_count, int spokes, uint64_t seed,
              const std::string& out) {
    SynthSpec spec;
    spec.image_size = size;
    spec.roi_size = roi_size;
    spec.roi_count = roi_count;
    spec.spokes = spokes;
    spec.seed = seed;

    const LabelMask mask = blob_mask_grid(spec);
    const IntensityImage star = siemens_star(size, spokes);

    const std::filesystem::path base(out);
    std::filesystem::create_directories(base / "int");
    std::filesystem::create_directories(base / "seg");
    write_intensity(base / "int" / "synth.pgm", star);
    write_mask(base / "seg" / "synth.pgm", mask);
    std::cout << "wrote " << (base / "int" / "synth.pgm").string() << " and "
              << (base / "seg" / "synth.pgm").string() << "\n";
    return 0;
}

int run_bench(const std::string& sweep_csv, const std::string& features, int threads,
              int repeats, const std::string& out) {
    std::ifstream in(sweep_csv);
    if (!in) throw IoError("cannot open " + sweep_csv);
    std::string line;
    bool header = true;
    ScalingReport report;
    const auto workdir = std::filesystem::temp_directory_path() / "featurex-bench";
    const std::vector<std::string> groups = split(features, ',');
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() < 2) throw FormatError("bad sweep row '" + line + "'");
        const ScalingReport cell =
            scaling_benchmark({std::stoi(cols[0])}, {std::stoi(cols[1])}, groups, threads,
                              workdir, repeats);
        report.rows.insert(report.rows.end(), cell.rows.begin(), cell.rows.end());
    }
    write_scaling_csv(report, out);
    std::cout << "wrote " << out << " (" << report.rows.size() << " cells)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"featurex - ROI feature extraction and soft-feature tuning"};
    app.require_subcommand(1);

    // extract
    auto* extract = app.add_subcommand("extract", "extract per-ROI features to CSV");
    ExtractionConfig config;
    std::string features = "*ALL*";
    std::string membudget;
    extract->add_option("--intDir", config.intensity_dir, "intensity image directory")
        ->required();
    extract->add_option("--segDir", config.mask_dir, "label mask directory")->required();
    extract->add_option("--features", features, "comma list of groups or *ALL*");
    extract->add_option("--profile", config.profile, "default | performance | ibsi-like");
    extract->add_option("--threads", config.threads, "worker thread count");
    extract->add_option("--membudget", membudget, "resident ROI byte budget");
    extract->add_option("--pattern", config.file_pattern, "filename glob");
    extract->add_option("--out", config.output_path, "output CSV path")->required();
    extract->add_flag("--serial", "use the serial reference path");

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "optimize soft-feature hyperparameters");
    std::string cal_dir, classes_csv, grid_spec = "ng=8,16,32;d=1;angles=1", tune_out;
    std::string statistic = "contrast";
    double fraction = 1.0, budget = 0;
    uint64_t seed = 42;
    int tune_threads = 1;
    tune_cmd->add_option("--calDir", cal_dir, "calibration dir with int/ and seg/")->required();
    tune_cmd->add_option("--calClasses", classes_csv, "CSV image,label,class")->required();
    tune_cmd->add_option("--grid", grid_spec, "grid spec, e.g. ng=2,4,8;d=1,2;angles=1,4");
    tune_cmd->add_option("--statistic", statistic, "GLCM statistic to tune");
    tune_cmd->add_option("--fraction", fraction, "stratified calibration fraction");
    tune_cmd->add_option("--seed", seed, "sampling seed");
    tune_cmd->add_option("--threads", tune_threads, "evaluation threads");
    tune_cmd->add_option("--budget", budget, "max cost per grid point (0 = none)");
    tune_cmd->add_option("--out", tune_out, "report CSV path")->required();

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic image/mask pair");
    int size = 512, roi_size = 500, roi_count = 16, spokes = 8;
    uint64_t synth_seed = 0;
    std::string synth_out;
    synth->add_option("--size", size, "square image size");
    synth->add_option("--roiSize", roi_size, "approximate blob area");
    synth->add_option("--roiCount", roi_count, "blob count");
    synth->add_option("--spokes", spokes, "Siemens star spokes (even)");
    synth->add_option("--seed", synth_seed, "blob orientation seed");
    synth->add_option("--out", synth_out, "output directory")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "run the scaling benchmark");
    std::string sweep_csv, bench_out, bench_features = "intensity,shape";
    int bench_threads = 1, repeats = 3;
    bench->add_option("--sweep", sweep_csv, "CSV with roi_size,roi_count rows")->required();
    bench->add_option("--features", bench_features, "comma list of groups");
    bench->add_option("--threads", bench_threads, "engine threads");
    bench->add_option("--repeats", repeats, "repetitions per cell (median)");
    bench->add_option("--out", bench_out, "report CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*extract) {
            config.features = split(features, ',');
            if (!membudget.empty()) config.memory_budget = std::stoull(membudget);
            if (extract->count("--serial")) config.parallel = false;
            return run_extract(config);
        }
        if (*tune_cmd)
            return run_tune(cal_dir, classes_csv, grid_spec, statistic, fraction, seed,
                            tune_threads, budget, tune_out);
        if (*synth) return run_synth(size, roi_size, roi_count, spokes, synth_seed, synth_out);
        if (*bench) return run_bench(sweep_csv, bench_features, bench_threads, repeats, bench_out);
    } catch (const ConfigError& e) {
        std::cerr << "featurex: " << e.what() << "\n";
        return 2;
    } catch (const UnknownProfile& e) {
        std::cerr << "featurex: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "featurex: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
