#include "ylab/experiment.hpp"

#include <fstream>

#include "json.hpp"
#include "ylab/snapshot_io.hpp"
#include "ylab/studies.hpp"

namespace ylab {

namespace fs = std::filesystem;
using njson = nlohmann::ordered_json;

namespace {

InitialData kind_of(const std::string& name) {
    if (name == "shear") return InitialData::Shear;
    if (name == "taylor_green") return InitialData::TaylorGreen;
    if (name == "smooth_random") return InitialData::SmoothRandom;
    return InitialData::SmoothedPatch;
}

InitialDataParams data_params_of(const ExperimentConfig& cfg) {
    InitialDataParams p;
    p.seed = cfg.seed;
    p.amplitude = cfg.amplitude;
    p.spectrum_power = cfg.spectrum_power;
    p.patch_radius = cfg.patch_radius;
    p.patch_delta = cfg.patch_delta;
    p.patch_roughness = cfg.patch_roughness;
    return p;
}

FluidConfig fluid_config_of(const ExperimentConfig& cfg) {
    FluidConfig f;
    f.grid = Grid2D(cfg.n, cfg.length);
    f.viscosity = cfg.viscosity;
    f.dt = cfg.dt;
    f.t_final = cfg.t_final;
    f.cfl = cfg.cfl;
    f.snapshot_stride = cfg.snapshot_stride;
    return f;
}

njson fit_json(const RateFit& f) {
    njson j;
    j["exponent"] = f.exponent;
    if (f.log_coefficient) j["log_coefficient"] = *f.log_coefficient;
    j["residual_rms"] = f.residual_rms;
    j["inconclusive"] = f.inconclusive;
    return j;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct ArtifactSink {
    fs::path dir;
    std::vector<std::string> names;

    fs::path reserve(const std::string& name) {
        names.push_back(name);
        return dir / name;
    }
    void write_manifest(std::uint64_t cfg_hash, const std::string& status) const {
        std::ofstream m(dir / "manifest.txt");
        m << "# ylab manifest\n";
        m << "config = " << hex64(cfg_hash) << "\n";
        m << "status = " << status << "\n";
        for (const std::string& n : names) {
            if (fs::exists(dir / n))
                m << "artifact " << n << " fnv1a=" << hex64(fnv1a_file(dir / n)) << "\n";
        }
    }
    void write_json(const std::string& name, const njson& j) {
        std::ofstream out(reserve(name));
        out << j.dump(2) << "\n";
    }
    void write_curve(const std::string& name, std::uint64_t hash, const CurveSeries& c) {
        CsvWriter w(reserve(name), hash, {"t", c.name});
        for (size_t i = 0; i < c.t.size(); ++i) w.row({c.t[i], c.value[i]});
    }
};

void run_diagnostics_study(const ExperimentConfig& cfg, ArtifactSink& sink,
                           std::uint64_t hash) {
    FluidConfig fc = fluid_config_of(cfg);
    SpectralField w0 = make_initial_data(fc.grid, kind_of(cfg.initial), data_params_of(cfg));
    Trajectory traj = solve(w0, fc);

    {
        CsvWriter w(sink.reserve("diagnostics.csv"), hash,
                    {"t", "enstrophy", "energy", "linf_vorticity", "h1_velocity"});
        for (const DiagRow& d : traj.diagnostics)
            w.row({d.t, d.enstrophy, d.energy, d.linf_vorticity, d.h1_velocity});
    }
    DyadicFrame frame(cfg.theta, fc.grid);
    const JSeries js = j_decomposition(traj.states, frame);
    const EnergyHfSeries es =
        highfreq_energy_identity(traj.states, frame, fc.curl_forcing, fc.viscosity);
    {
        CsvWriter w(sink.reserve("jseries.csv"), hash,
                    {"t", "j1", "j2", "j3", "j_total", "bound_j2", "bound_j3", "energyhf_lhs",
                     "energyhf_rhs", "energyhf_residual"});
        for (size_t i = 0; i < js.t.size(); ++i)
            w.row({js.t[i], js.j1[i], js.j2[i], js.j3[i], js.total[i], js.bound_j2[i],
                   js.bound_j3[i], es.lhs[i], es.rhs[i], es.residual[i]});
    }
    {
        CsvWriter w(sink.reserve("transport.csv"), hash, {"p", "max_violation"});
        w.row({2.0, transport_bound_check(traj, 2.0)});
        w.row({kInf, transport_bound_check(traj, kInf)});
    }
    const FlowState& last = traj.states.back();
    write_snapshot(sink.reserve("omega_final.ylab"),
                   snapshot_of({{"omega", &last.omega}, {"u1", &last.u1}, {"u2", &last.u2}},
                               last.t));

    njson summary;
    summary["study"] = "diagnostics";
    summary["config"] = hex64(hash);
    summary["snapshots"] = traj.states.size();
    summary["final_enstrophy"] = traj.diagnostics.back().enstrophy;
    summary["energyhf_residual_final"] = es.residual.back();
    sink.write_json("summary.json", summary);
}

void run_perturbation(const ExperimentConfig& cfg, ArtifactSink& sink, std::uint64_t hash) {
    PerturbationStudyConfig sc;
    sc.solver = fluid_config_of(cfg);
    sc.solver.viscosity = 0.0;
    sc.sweep = cfg.sweep;
    sc.kind = kind_of(cfg.initial);
    sc.data_params = data_params_of(cfg);
    sc.perturb_seed = cfg.perturb_seed;
    sc.perturb_amplitude = cfg.perturb_amplitude;
    sc.theta_alpha = cfg.theta_alpha;
    sc.s_T = cfg.s_t;
    PerturbationReport rep = run_perturbation_study(sc);

    {
        CsvWriter w(sink.reserve("errors.csv"), hash,
                    {"eps", "theta", "sup_l2", "sup_h1dot", "sup_h1", "low_actual_max",
                     "low_bound_max", "high_norm_max", "split_ok"});
        for (const PerturbationRun& r : rep.runs)
            w.row({r.eps, r.theta, r.sup_l2, r.sup_h1dot, r.sup_h1, r.low_actual_max,
                   r.low_bound_max, r.high_norm_max, r.split_ok ? 1.0 : 0.0});
    }
    for (size_t i = 0; i < rep.runs.size(); ++i)
        sink.write_curve("curve_h1_eps" + std::to_string(i) + ".csv", hash,
                         rep.runs[i].h1_curve);

    njson summary;
    summary["study"] = "perturbation";
    summary["config"] = hex64(hash);
    summary["fit_l2"] = fit_json(rep.fit_l2);
    summary["fit_h1"] = fit_json(rep.fit_h1);
    summary["split_ok"] = rep.split_ok;
    summary["monotone_h1"] = rep.monotone_h1;
    sink.write_json("summary.json", summary);
}

void run_inviscid(const ExperimentConfig& cfg, ArtifactSink& sink, std::uint64_t hash) {
    InviscidStudyConfig sc;
    sc.solver = fluid_config_of(cfg);
    sc.solver.viscosity = 0.0;
    sc.sweep = cfg.sweep;
    sc.kind = kind_of(cfg.initial);
    sc.data_params = data_params_of(cfg);
    sc.besov_p = cfg.besov_p;
    sc.ref_dt_factor = cfg.ref_dt_factor;
    sc.measure_s_T = cfg.measure_s_t;
    InviscidReport rep = run_inviscid_study(sc);

    {
        CsvWriter w(sink.reserve("errors.csv"), hash,
                    {"viscosity", "err_l2", "err_h1dot", "err_h1"});
        for (size_t i = 0; i < rep.sweep.size(); ++i)
            w.row({rep.sweep[i], rep.err_l2[i], rep.err_h1dot[i], rep.err_h1[i]});
    }
    if (!rep.besov_profile.t.empty())
        sink.write_curve("besov_profile.csv", hash, rep.besov_profile);

    njson summary;
    summary["study"] = "inviscid";
    summary["config"] = hex64(hash);
    summary["fit_l2"] = fit_json(rep.fit_l2);
    summary["fit_h1dot"] = fit_json(rep.fit_h1dot);
    summary["fit_h1dot_log"] = fit_json(rep.fit_h1dot_log);
    summary["s_T"] = rep.s_T;
    summary["predicted_h1_exponent"] = rep.predicted_h1_exponent;
    summary["self_convergence_l2"] = rep.self_convergence_l2;
    summary["self_convergence_h1dot"] = rep.self_convergence_h1dot;
    summary["reference_dominates"] = rep.reference_dominates;
    sink.write_json("summary.json", summary);
}

void run_em_limit(const ExperimentConfig& cfg, ArtifactSink& sink, std::uint64_t hash) {
    EmLimitStudyConfig sc;
    sc.solver.grid = Grid2D(cfg.n, cfg.length);
    sc.solver.sigma = cfg.sigma;
    sc.solver.dt = cfg.dt;
    sc.solver.t_final = cfg.t_final;
    sc.solver.cfl = cfg.cfl;
    sc.solver.snapshot_stride = cfg.snapshot_stride;
    sc.sweep = cfg.sweep;
    sc.kind = kind_of(cfg.initial);
    sc.data_params = data_params_of(cfg);
    sc.b_kind = kind_of(cfg.b_initial);
    sc.b_params.seed = cfg.b_seed;
    sc.b_params.amplitude = cfg.b_amplitude;
    sc.eta = cfg.eta;
    EmLimitReport rep = run_em_limit_study(sc);

    {
        CsvWriter w(sink.reserve("errors.csv"), hash,
                    {"c", "err_u_h1", "err_b_l2", "err_b_h1dot_l2t", "err_j_l2t", "ampere_l2t",
                     "pg_h1_l1t", "energy_violation"});
        for (const EmLimitRun& r : rep.runs)
            w.row({r.c, r.err_u_h1, r.err_b_l2, r.err_b_h1dot_l2t, r.err_j_l2t, r.ampere_l2t,
                   r.pg_h1_l1t, r.energy_violation});
    }

    njson summary;
    summary["study"] = "em_limit";
    summary["config"] = hex64(hash);
    summary["fit_ampere"] = fit_json(rep.fit_ampere);
    summary["fit_u_h1"] = fit_json(rep.fit_u_h1);
    summary["monotone"] = rep.monotone;
    sink.write_json("summary.json", summary);
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const fs::path& outdir) {
    fs::create_directories(outdir);
    const std::uint64_t hash = config_hash(cfg);
    ArtifactSink sink{outdir, {}};
    {
        std::ofstream r(sink.reserve("config.resolved"));
        r << render_config(cfg);
    }
    sink.write_manifest(hash, "running");
    try {
        if (cfg.study == "diagnostics") run_diagnostics_study(cfg, sink, hash);
        else if (cfg.study == "perturbation") run_perturbation(cfg, sink, hash);
        else if (cfg.study == "inviscid") run_inviscid(cfg, sink, hash);
        else run_em_limit(cfg, sink, hash);
    } catch (const SolverError& e) {
        sink.write_manifest(hash, std::string("failed: ") + e.what() + " at t=" +
                                      std::to_string(e.t_fail));
        return 2;
    }
    sink.write_manifest(hash, "complete");
    return 0;
}

}  // namespace ylab
