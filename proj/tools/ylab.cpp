// ylab: pseudospectral laboratory for 2D ideal-flow stability studies.
//
// Subcommands:
//   run <config> [--outdir DIR]   execute an experiment (exit 0/1/2)
//   validate <config>             report every config violation (exit 0/1)
//   norms <snapshot> [--s S --p P --theta TH]   print field norms
//   diff <A> <B> [--norm l2|linf|hs:<s>]        print per-field differences

#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "ylab/dyadic.hpp"
#include "ylab/experiment.hpp"
#include "ylab/snapshot_io.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ylab::Error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_run(const std::string& config_path, const std::string& outdir_flag) {
    std::string text;
    try {
        text = slurp(config_path);
    } catch (const ylab::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    const std::vector<std::string> errors = ylab::config_errors(text);
    if (!errors.empty()) {
        for (const std::string& e : errors) std::fprintf(stderr, "config error: %s\n", e.c_str());
        return 1;
    }
    ylab::ExperimentConfig cfg = ylab::parse_config(text);
    const std::string outdir = outdir_flag.empty() ? cfg.outdir : outdir_flag;
    const int status = ylab::run_experiment(cfg, outdir);
    if (status == 0)
        std::printf("experiment complete: %s\n", outdir.c_str());
    else
        std::fprintf(stderr, "experiment failed (see manifest in %s)\n", outdir.c_str());
    return status;
}

int cmd_validate(const std::string& config_path) {
    std::string text;
    try {
        text = slurp(config_path);
    } catch (const ylab::Error& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 1;
    }
    const std::vector<std::string> errors = ylab::config_errors(text);
    if (errors.empty()) {
        std::printf("config valid\n");
        return 0;
    }
    for (const std::string& e : errors) std::fprintf(stderr, "config error: %s\n", e.c_str());
    return 1;
}

int cmd_norms(const std::string& path, double s, double p, double theta) {
    const ylab::Snapshot snap = ylab::read_snapshot(path);
    const ylab::DyadicFrame frame(theta, snap.grid);
    std::printf("snapshot %s: N=%d L=%.17g t=%.17g fields=%zu\n", path.c_str(), snap.grid.n,
                snap.grid.length, snap.t, snap.fields.size());
    for (size_t i = 0; i < snap.fields.size(); ++i) {
        ylab::SpectralField f = ylab::from_real(snap.grid, snap.fields[i]);
        std::printf("%s: l2=%.12g linf=%.12g lp(%g)=%.12g hs(%g)=%.12g besov(%g,%g)=%.12g\n",
                    snap.names[i].c_str(), ylab::lp_norm(f, 2.0), ylab::lp_norm(f, ylab::kInf),
                    p, ylab::lp_norm(f, p), s, ylab::sobolev_norm(f, s), s, p,
                    ylab::besov_norm(f, s, p, frame));
    }
    return 0;
}

int cmd_diff(const std::string& a, const std::string& b, const std::string& norm_spec) {
    const ylab::Snapshot sa = ylab::read_snapshot(a);
    const ylab::Snapshot sb = ylab::read_snapshot(b);
    if (!(sa.grid == sb.grid) || sa.fields.size() != sb.fields.size())
        throw ylab::ConfigError("diff: snapshots have different grids or field counts");
    for (size_t i = 0; i < sa.fields.size(); ++i) {
        ylab::SpectralField fa = ylab::from_real(sa.grid, sa.fields[i]);
        ylab::SpectralField fb = ylab::from_real(sb.grid, sb.fields[i]);
        ylab::SpectralField d = fa - fb;
        double value;
        if (norm_spec == "l2") value = ylab::lp_norm(d, 2.0);
        else if (norm_spec == "linf") value = ylab::lp_norm(d, ylab::kInf);
        else if (norm_spec.rfind("hs:", 0) == 0)
            value = ylab::sobolev_norm(d, std::stod(norm_spec.substr(3)));
        else throw ylab::ConfigError("diff: unknown norm spec '" + norm_spec + "'");
        std::printf("%s: %.17g\n", sa.names[i].c_str(), value);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ylab: 2D pseudospectral stability laboratory"};
    app.require_subcommand(1);

    std::string config_path, outdir_flag;
    CLI::App* run = app.add_subcommand("run", "execute an experiment config");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--outdir", outdir_flag, "override the configured output directory");

    std::string vconfig;
    CLI::App* validate = app.add_subcommand("validate", "validate an experiment config");
    validate->add_option("config", vconfig, "experiment config file")->required();

    std::string snap_path;
    double s = 1.0, p = 2.0, theta = 1.0;
    CLI::App* norms = app.add_subcommand("norms", "print norms of snapshot fields");
    norms->add_option("snapshot", snap_path, "snapshot file")->required();
    norms->add_option("--s", s, "Sobolev/Besov regularity");
    norms->add_option("--p", p, "Lebesgue exponent");
    norms->add_option("--theta", theta, "dyadic frame cutoff");

    std::string da, db, norm_spec = "l2";
    CLI::App* diff = app.add_subcommand("diff", "norm of the difference of two snapshots");
    diff->add_option("a", da, "first snapshot")->required();
    diff->add_option("b", db, "second snapshot")->required();
    diff->add_option("--norm", norm_spec, "l2 | linf | hs:<s>");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, outdir_flag);
        if (validate->parsed()) return cmd_validate(vconfig);
        if (norms->parsed()) return cmd_norms(snap_path, s, p, theta);
        if (diff->parsed()) return cmd_diff(da, db, norm_spec);
    } catch (const ylab::SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 2;
    } catch (const ylab::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
