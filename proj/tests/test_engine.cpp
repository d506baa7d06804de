#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>

#include "featurex/engine.hpp"
#include "featurex/errors.hpp"
#include "featurex/pgm.hpp"
#include "featurex/synth.hpp"

using namespace featurex;

namespace {

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir / "int");
    std::filesystem::create_directories(dir / "seg");
    return dir;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

// Two-ROI 4x4 pair.
void write_simple_pair(const std::filesystem::path& dir) {
    write_pgm(dir / "int" / "a.pgm", 4, 4, 255,
              {10, 20, 30, 40, 50, 60, 70, 80, 90, 100, 110, 120, 130, 140, 150, 160});
    write_pgm(dir / "seg" / "a.pgm", 4, 4, 255,
              {1, 1, 0, 0, 1, 1, 0, 0, 0, 0, 2, 2, 0, 0, 2, 2});
}

ExtractionConfig base_config(const std::filesystem::path& dir) {
    ExtractionConfig config;
    config.intensity_dir = dir / "int";
    config.mask_dir = dir / "seg";
    config.output_path = dir / "features.csv";
    return config;
}

void write_synthetic_pair(const std::filesystem::path& dir, int roi_count) {
    SynthSpec spec;
    spec.image_size = 256;
    spec.roi_size = 220;
    spec.roi_count = roi_count;
    spec.seed = 5;
    const LabelMask mask = blob_mask_grid(spec);
    const IntensityImage star = siemens_star(spec.image_size, 8);
    write_intensity(dir / "int" / "synth.pgm", star);
    write_mask(dir / "seg" / "synth.pgm", mask);
}

} // namespace

TEST_CASE("profiles resolve to their presets") {
    CHECK(resolve_profile("performance").glcm.angles.size() == 1);
    CHECK(resolve_profile("default").glcm.ng == 64);
    CHECK(resolve_profile("default").glcm.angles.size() == 4);
    CHECK(resolve_profile("ibsi-like").glcm.ng == 256);
    CHECK(resolve_profile("ibsi-like").glcm.symmetric);
    CHECK_THROWS_AS(resolve_profile("bogus"), UnknownProfile);
}

TEST_CASE("unknown feature groups are rejected") {
    CHECK_THROWS_AS(resolve_feature_groups({"intensity", "nope"}), ConfigError);
    CHECK_THROWS_AS(resolve_feature_groups({}), ConfigError);
    CHECK(resolve_feature_groups({"*ALL*"}).size() == 7);
    CHECK(resolve_feature_groups({"shape", "intensity"}) ==
          std::vector<std::string>{"intensity", "shape"});
}

TEST_CASE("extraction writes one row per ROI") {
    const auto dir = fresh_dir("fx_engine_simple");
    write_simple_pair(dir);
    ExtractionConfig config = base_config(dir);
    config.features = {"intensity"};
    const RunSummary s = run(config);
    CHECK(s.images == 1);
    CHECK(s.rois == 2);
    CHECK(s.rows == 2);
    CHECK_FALSE(s.completed_with_errors());

    std::ifstream in(config.output_path);
    std::string header, row1, row2, extra;
    REQUIRE(std::getline(in, header));
    CHECK(header.substr(0, 17) == "image,mask,label,");
    REQUIRE(std::getline(in, row1));
    REQUIRE(std::getline(in, row2));
    CHECK_FALSE(std::getline(in, extra));
    CHECK(row1.substr(0, 14) == "a.pgm,a.pgm,1,");
    CHECK(row2.substr(0, 14) == "a.pgm,a.pgm,2,");
}

TEST_CASE("empty mask yields a header-only csv") {
    const auto dir = fresh_dir("fx_engine_empty");
    write_pgm(dir / "int" / "a.pgm", 2, 2, 255, {1, 2, 3, 4});
    write_pgm(dir / "seg" / "a.pgm", 2, 2, 255, {0, 0, 0, 0});
    ExtractionConfig config = base_config(dir);
    const RunSummary s = run(config);
    CHECK(s.rois == 0);
    CHECK(s.rows == 0);
    std::ifstream in(config.output_path);
    std::string line;
    CHECK(std::getline(in, line));
    CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("unmatched files are logged and skipped") {
    const auto dir = fresh_dir("fx_engine_unmatched");
    write_simple_pair(dir);
    write_pgm(dir / "seg" / "orphan.pgm", 1, 1, 255, {1}); // mask without image
    ExtractionConfig config = base_config(dir);
    const RunSummary s = run(config);
    CHECK(s.images == 1); // the good pair still processed
    CHECK(s.completed_with_errors());
}

TEST_CASE("a corrupt pair is skipped, the rest completes") {
    const auto dir = fresh_dir("fx_engine_corrupt");
    write_simple_pair(dir);
    std::ofstream(dir / "int" / "bad.pgm") << "P5\n2 2\n255\nX"; // truncated
    write_pgm(dir / "seg" / "bad.pgm", 2, 2, 255, {1, 0, 0, 0});
    ExtractionConfig config = base_config(dir);
    const RunSummary s = run(config);
    CHECK(s.images == 1);
    CHECK(s.rows == 2);
    CHECK(s.completed_with_errors());
}

TEST_CASE("csv formatting contract") {
    const auto path = std::filesystem::temp_directory_path() / "fx_csv.csv";
    SUBCASE("empty row set") {
        CHECK(write_csv({"x"}, {}, path) == 0);
        CHECK(slurp(path) == "image,mask,label,x\n");
    }
    SUBCASE("rows sort by label") {
        std::vector<FeatureRow> rows;
        rows.push_back({"a.pgm", "a.pgm", 2, {1.0}});
        rows.push_back({"a.pgm", "a.pgm", 1, {2.0}});
        write_csv({"x"}, rows, path);
        CHECK(slurp(path) == "image,mask,label,x\na.pgm,a.pgm,1,2\na.pgm,a.pgm,2,1\n");
    }
    SUBCASE("ten significant digits") {
        write_csv({"x"}, {{"a", "a", 1, {1.0 / 3.0}}}, path);
        CHECK(slurp(path) == "image,mask,label,x\na,a,1,0.3333333333\n");
    }
}

TEST_CASE("serial and parallel paths write identical bytes") {
    const auto dir = fresh_dir("fx_engine_par");
    write_synthetic_pair(dir, 25);

    ExtractionConfig config = base_config(dir);
    config.features = {"*ALL*"};

    config.parallel = false;
    config.threads = 1;
    config.output_path = dir / "serial.csv";
    run(config);

    config.parallel = true;
    config.threads = 4;
    config.output_path = dir / "parallel.csv";
    run(config);

    CHECK(slurp(dir / "serial.csv") == slurp(dir / "parallel.csv"));
}

TEST_CASE("rerunning an unchanged config is idempotent") {
    const auto dir = fresh_dir("fx_engine_idem");
    write_simple_pair(dir);
    ExtractionConfig config = base_config(dir);
    run(config);
    const std::string first = slurp(config.output_path);
    run(config);
    CHECK(slurp(config.output_path) == first);
}

TEST_CASE("spilled run matches the unlimited-budget run byte for byte") {
    const auto dir = fresh_dir("fx_engine_spill");
    write_synthetic_pair(dir, 16);

    ExtractionConfig config = base_config(dir);
    config.features = {"intensity", "shape", "moments"};
    config.output_path = dir / "unlimited.csv";
    run(config);

    config.memory_budget = 4096;
    config.spill_dir = dir / "spill";
    config.output_path = dir / "budgeted.csv";
    const RunSummary s = run(config);
    CHECK_FALSE(s.completed_with_errors());
    CHECK(slurp(dir / "unlimited.csv") == slurp(dir / "budgeted.csv"));
    // spill files were cleaned up
    CHECK(!std::filesystem::exists(dir / "spill" / "roi_1.bin"));
}

TEST_CASE("column layout tracks the angle set") {
    TextureParams params = resolve_profile("performance");
    const auto cols = feature_columns({"glcm"}, params);
    // one angle plus the cross-angle mean
    CHECK(cols.size() == glcm_feature_names().size() * 2);
    CHECK(cols[0] == "glcm_asm_0");
    CHECK(cols[1] == "glcm_asm_ave");

    params = resolve_profile("default");
    CHECK(feature_columns({"glcm"}, params).size() == glcm_feature_names().size() * 5);
}

TEST_CASE("environment variable overrides the spill directory") {
    const auto dir = fresh_dir("fx_engine_env");
    write_simple_pair(dir);
    const auto env_spill = dir / "env_spill";
    setenv("FEATUREX_SPILL_DIR", env_spill.c_str(), 1);
    ExtractionConfig config = base_config(dir);
    config.memory_budget = 16; // force spilling
    config.features = {"intensity"};
    const RunSummary s = run(config);
    unsetenv("FEATUREX_SPILL_DIR");
    CHECK_FALSE(s.completed_with_errors());
    CHECK(std::filesystem::exists(env_spill)); // directory was created and used
}
