#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"
#include "ylab/config.hpp"
#include "ylab/experiment.hpp"
#include "ylab/snapshot_io.hpp"

using namespace ylab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::vector<std::string>& errors, const std::string& needle) {
    for (const std::string& e : errors)
        if (e.find(needle) != std::string::npos) return true;
    return false;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "ylab_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
    ExperimentConfig cfg = parse_config(
        "study = inviscid\n"
        "sweep = 1e-3, 3e-4, 1e-4, 3e-5\n");
    CHECK(cfg.n == 128);
    CHECK(cfg.length == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(cfg.cfl == 0.5);
    CHECK(cfg.sweep.size() == 4);
}

TEST_CASE("validation reports every violation with its precondition") {
    const std::string text =
        "study = inviscid\n"
        "viscosity = -1\n"
        "sweep = 1e-3, 3e-4, 1e-4\n"
        "n = 65\n";
    const std::vector<std::string> errors = config_errors(text);
    CHECK(contains(errors, "viscosity >= 0"));
    CHECK(contains(errors, "at least 4 values"));
    CHECK(contains(errors, "power of two"));
    CHECK(errors.size() >= 3);
    CHECK_THROWS_AS(parse_config(text), ConfigError);
}

TEST_CASE("unknown keys name the nearest valid key") {
    const std::vector<std::string> errors = config_errors("viscosty = 0.1\n");
    CHECK(contains(errors, "unknown key 'viscosty'"));
    CHECK(contains(errors, "'viscosity'"));
}

TEST_CASE("sweep ordering depends on the study") {
    CHECK(contains(config_errors("study = em_limit\nsweep = 400, 200, 100, 50\n"),
                   "strictly increasing"));
    CHECK(contains(config_errors("study = inviscid\nsweep = 1e-4, 3e-4, 1e-3, 3e-3\n"),
                   "strictly decreasing"));
}

TEST_CASE("render and parse round trip") {
    ExperimentConfig cfg;
    cfg.study = "em_limit";
    cfg.n = 64;
    cfg.dt = 0.0025;
    cfg.t_final = 0.25;
    cfg.snapshot_stride = 10;
    cfg.sweep = {50.0, 100.0, 200.0, 400.0};
    cfg.sigma = 1.5;
    cfg.b_amplitude = 0.7;
    ExperimentConfig back = parse_config(render_config(cfg));
    CHECK(back == cfg);
    CHECK(config_hash(back) == config_hash(cfg));

    ExperimentConfig patch;
    patch.study = "diagnostics";
    patch.initial = "smoothed_patch";
    patch.patch_delta = 0.5;
    patch.patch_roughness = 0.05;
    CHECK(parse_config(render_config(patch)) == patch);
}

TEST_CASE("snapshot file round trip and format guard") {
    Grid2D g(32, 2.0 * std::numbers::pi);
    SpectralField f = test::random_field(g, 3);
    SpectralField h = test::random_field(g, 4);
    fs::path dir = fresh_dir("snap");
    write_snapshot(dir / "a.ylab", snapshot_of({{"f", &f}, {"h", &h}}, 1.25));
    Snapshot back = read_snapshot(dir / "a.ylab");
    CHECK(back.grid == g);
    CHECK(back.t == 1.25);
    REQUIRE(back.fields.size() == 2);
    SpectralField f2 = from_real(back.grid, back.fields[0]);
    CHECK(test::max_coeff_diff(f, f2) <= 1e-12);

    std::ofstream bad(dir / "bad.ylab", std::ios::binary);
    bad << "NOTASNAP";
    bad.close();
    CHECK_THROWS_AS(read_snapshot(dir / "bad.ylab"), Error);
}

TEST_CASE("diagnostics experiment writes artifacts with zero J series on shear") {
    ExperimentConfig cfg;
    cfg.study = "diagnostics";
    cfg.n = 32;
    cfg.initial = "shear";
    cfg.dt = 0.05;
    cfg.t_final = 0.25;
    cfg.snapshot_stride = 1;
    cfg.theta = 4.0;
    fs::path dir = fresh_dir("diag");
    CHECK(run_experiment(cfg, dir) == 0);
    CHECK(fs::exists(dir / "manifest.txt"));
    CHECK(fs::exists(dir / "diagnostics.csv"));
    CHECK(fs::exists(dir / "jseries.csv"));
    CHECK(fs::exists(dir / "omega_final.ylab"));
    CHECK(slurp(dir / "manifest.txt").find("status = complete") != std::string::npos);

    // header comment carries the config hash; J columns are identically zero
    const std::string js = slurp(dir / "jseries.csv");
    CHECK(js.rfind("# ylab v1 config=", 0) == 0);
    std::istringstream lines(js);
    std::string line;
    std::getline(lines, line);  // comment
    std::getline(lines, line);  // header
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        std::istringstream cells(line);
        std::string cell;
        std::vector<double> v;
        while (std::getline(cells, cell, ',')) v.push_back(std::stod(cell));
        CHECK(v[1] == 0.0);  // j1
        CHECK(v[2] == 0.0);  // j2
        CHECK(v[3] == 0.0);  // j3
    }
    CHECK(rows >= 2);
}

TEST_CASE("repeated runs produce byte-identical outputs") {
    ExperimentConfig cfg;
    cfg.study = "diagnostics";
    cfg.n = 32;
    cfg.initial = "smooth_random";
    cfg.amplitude = 2.0;
    cfg.dt = 0.02;
    cfg.t_final = 0.2;
    cfg.snapshot_stride = 2;
    cfg.theta = 3.0;
    fs::path d1 = fresh_dir("det1");
    fs::path d2 = fresh_dir("det2");
    CHECK(run_experiment(cfg, d1) == 0);
    CHECK(run_experiment(cfg, d2) == 0);
    for (const char* name : {"diagnostics.csv", "jseries.csv", "transport.csv", "summary.json"}) {
        CHECK(slurp(d1 / name) == slurp(d2 / name));
        CHECK(fnv1a_file(d1 / name) == fnv1a_file(d2 / name));
    }
}

TEST_CASE("solver failure is reported and partial artifacts are kept") {
    ExperimentConfig cfg;
    cfg.study = "diagnostics";
    cfg.n = 32;
    cfg.initial = "shear";
    cfg.dt = 1e9;
    cfg.t_final = 1e9;
    fs::path dir = fresh_dir("fail");
    CHECK(run_experiment(cfg, dir) == 2);
    CHECK(fs::exists(dir / "config.resolved"));
    const std::string manifest = slurp(dir / "manifest.txt");
    CHECK(manifest.find("status = failed") != std::string::npos);
}
