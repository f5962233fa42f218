#include "ylab/studies.hpp"

#include <cmath>
#include <future>

namespace ylab {

namespace {

double vec_l2(const SpectralField& a, const SpectralField& b) {
    const double n1 = sobolev_norm(a, 0.0), n2 = sobolev_norm(b, 0.0);
    return std::sqrt(n1 * n1 + n2 * n2);
}

double vec_h1dot(const SpectralField& a, const SpectralField& b) {
    const double n1 = sobolev_norm(a, 1.0), n2 = sobolev_norm(b, 1.0);
    return std::sqrt(n1 * n1 + n2 * n2);
}

void check_sweep(const std::vector<double>& sweep, bool decreasing, const char* what) {
    if (sweep.size() < 4)
        throw ConfigError(std::string(what) + ": sweep needs at least 4 values");
    for (size_t i = 0; i < sweep.size(); ++i) {
        if (!(sweep[i] > 0.0))
            throw ConfigError(std::string(what) + ": sweep values must be positive");
        if (i > 0) {
            const bool ok = decreasing ? sweep[i] < sweep[i - 1] : sweep[i] > sweep[i - 1];
            if (!ok)
                throw ConfigError(std::string(what) +
                                  (decreasing ? ": sweep must be strictly decreasing"
                                              : ": sweep must be strictly increasing"));
        }
    }
}

}  // namespace

PerturbationReport run_perturbation_study(const PerturbationStudyConfig& cfg) {
    check_sweep(cfg.sweep, /*decreasing=*/true, "perturbation study");
    if (cfg.solver.viscosity != 0.0)
        throw ConfigError("perturbation study: the reference system is inviscid");
    const Grid2D& g = cfg.solver.grid;

    SpectralField w0 = make_initial_data(g, cfg.kind, cfg.data_params);
    InitialDataParams pp;
    pp.seed = cfg.perturb_seed;
    pp.amplitude = cfg.perturb_amplitude;
    SpectralField dw = make_initial_data(g, InitialData::SmoothRandom, pp);

    std::vector<FlowState> reference;
    solve_streaming(w0, cfg.solver,
                    [&](const FlowState& s, const DiagRow&) { reference.push_back(s); });

    auto run_one = [&](double eps) {
        PerturbationRun r;
        r.eps = eps;
        r.theta = theta_schedule(std::min(eps, 0.5), cfg.theta_alpha, cfg.s_T);
        SpectralField wp = w0;
        wp.add_scaled(dw, eps);
        size_t idx = 0;
        solve_streaming(wp, cfg.solver, [&](const FlowState& s, const DiagRow&) {
            const FlowState& ref = reference.at(idx++);
            SpectralField d1 = s.u1 - ref.u1;
            SpectralField d2 = s.u2 - ref.u2;
            const double l2 = vec_l2(d1, d2);
            SpectralField dw_err = s.omega - ref.omega;
            const double h1dot = sobolev_norm(dw_err, 0.0);
            r.sup_l2 = std::max(r.sup_l2, l2);
            r.sup_h1dot = std::max(r.sup_h1dot, h1dot);
            r.sup_h1 = std::max(r.sup_h1, std::sqrt(l2 * l2 + h1dot * h1dot));
            r.h1_curve.t.push_back(s.t);
            r.h1_curve.value.push_back(std::sqrt(l2 * l2 + h1dot * h1dot));

            const ExtrapolationSplit e1 = extrapolation_split(s.u1, ref.u1, r.theta, 0.0, 1.0);
            const ExtrapolationSplit e2 = extrapolation_split(s.u2, ref.u2, r.theta, 0.0, 1.0);
            const double low_actual = std::hypot(e1.low_actual, e2.low_actual);
            const double low_bound = std::hypot(e1.low_bound, e2.low_bound);
            const double high = std::hypot(e1.high_norm, e2.high_norm);
            if (low_actual > low_bound * (1.0 + 1e-12)) r.split_ok = false;
            r.low_actual_max = std::max(r.low_actual_max, low_actual);
            r.low_bound_max = std::max(r.low_bound_max, low_bound);
            r.high_norm_max = std::max(r.high_norm_max, high);
        });
        r.h1_curve.name = "h1_error";
        return r;
    };

    std::vector<std::future<PerturbationRun>> jobs;
    for (double eps : cfg.sweep) jobs.push_back(std::async(std::launch::async, run_one, eps));

    PerturbationReport rep;
    for (auto& j : jobs) rep.runs.push_back(j.get());

    std::vector<RateRow> tl2, th1;
    for (const PerturbationRun& r : rep.runs) {
        rep.split_ok = rep.split_ok && r.split_ok;
        tl2.push_back({r.eps, std::max(r.sup_l2, 1e-300)});
        th1.push_back({r.eps, std::max(r.sup_h1, 1e-300)});
    }
    for (size_t i = 1; i < rep.runs.size(); ++i)
        if (!(rep.runs[i].sup_h1 < rep.runs[i - 1].sup_h1)) rep.monotone_h1 = false;
    rep.fit_l2 = fit_rate(tl2, RateModel::PurePower);
    rep.fit_h1 = fit_rate(th1, RateModel::PurePower);
    return rep;
}

double measured_regularity(const SpectralField& w_n, const SpectralField& w_2n) {
    DyadicFrame f1(1.0, w_n.grid());
    DyadicFrame f2(1.0, w_2n.grid());
    double s_T = 0.0;
    for (double s = 0.05; s <= 2.0 + 1e-9; s += 0.05) {
        const double a = besov_norm(w_n, s, 2.0, f1);
        const double b = besov_norm(w_2n, s, 2.0, f2);
        if (std::abs(a - b) > 0.1 * std::max(a, b)) break;
        s_T = s;
    }
    return s_T;
}

InviscidReport run_inviscid_study(const InviscidStudyConfig& cfg) {
    check_sweep(cfg.sweep, /*decreasing=*/true, "inviscid study");
    const Grid2D& g = cfg.solver.grid;
    SpectralField w0 = make_initial_data(g, cfg.kind, cfg.data_params);

    // Euler reference at dt/ref_dt_factor; snapshots land on the family times.
    FluidConfig ref_cfg = cfg.solver;
    ref_cfg.viscosity = 0.0;
    ref_cfg.curl_forcing = nullptr;
    ref_cfg.dt = cfg.solver.dt / cfg.ref_dt_factor;
    ref_cfg.snapshot_stride = cfg.solver.snapshot_stride * cfg.ref_dt_factor;

    // Richardson companion: Euler at the family cadence, so the measured gap
    // to the dt/ref_dt_factor reference is exactly the temporal error that
    // could contaminate the family-vs-reference signal.
    FluidConfig half_cfg = ref_cfg;
    half_cfg.dt = cfg.solver.dt;
    half_cfg.snapshot_stride = cfg.solver.snapshot_stride;

    auto collect = [&](const FluidConfig& c, const SpectralField& data) {
        std::vector<FlowState> states;
        solve_streaming(data, c,
                        [&](const FlowState& s, const DiagRow&) { states.push_back(s); });
        return states;
    };

    auto ref_job = std::async(std::launch::async, collect, ref_cfg, w0);
    auto half_job = std::async(std::launch::async, collect, half_cfg, w0);

    std::future<SpectralField> fine_job;
    if (cfg.measure_s_T) {
        fine_job = std::async(std::launch::async, [&] {
            Grid2D g2(2 * g.n, g.length);
            FluidConfig fine_cfg = ref_cfg;
            fine_cfg.grid = g2;
            fine_cfg.dt = cfg.solver.dt / 2.0;
            fine_cfg.snapshot_stride = 1 << 28;
            SpectralField last(g2);
            solve_streaming(lift_to(w0, g2.n), fine_cfg,
                            [&](const FlowState& s, const DiagRow&) { last = s.omega; });
            return last;
        });
    }

    const std::vector<FlowState> reference = ref_job.get();

    InviscidReport rep;
    {
        const std::vector<FlowState> half = half_job.get();
        for (size_t i = 0; i < reference.size(); ++i) {
            SpectralField d1 = reference[i].u1 - half[i].u1;
            SpectralField d2 = reference[i].u2 - half[i].u2;
            rep.self_convergence_l2 = std::max(rep.self_convergence_l2, vec_l2(d1, d2));
            SpectralField dw = reference[i].omega - half[i].omega;
            rep.self_convergence_h1dot =
                std::max(rep.self_convergence_h1dot, sobolev_norm(dw, 0.0));
        }
    }

    struct FamilyResult {
        double err_l2 = 0.0, err_h1dot = 0.0;
        std::vector<SpectralField> omegas;  // kept only for the smallest viscosity
        std::vector<double> times;
    };
    auto run_one = [&](double eps, bool keep_states) {
        FamilyResult fr;
        FluidConfig fam = cfg.solver;
        fam.viscosity = eps;
        size_t idx = 0;
        solve_streaming(w0, fam, [&](const FlowState& s, const DiagRow&) {
            const FlowState& ref = reference.at(idx++);
            SpectralField d1 = s.u1 - ref.u1;
            SpectralField d2 = s.u2 - ref.u2;
            fr.err_l2 = std::max(fr.err_l2, vec_l2(d1, d2));
            SpectralField dw = s.omega - ref.omega;
            fr.err_h1dot = std::max(fr.err_h1dot, sobolev_norm(dw, 0.0));
            if (keep_states) {
                fr.omegas.push_back(s.omega);
                fr.times.push_back(s.t);
            }
        });
        return fr;
    };

    std::vector<std::future<FamilyResult>> jobs;
    for (size_t i = 0; i < cfg.sweep.size(); ++i)
        jobs.push_back(std::async(std::launch::async, run_one, cfg.sweep[i],
                                  i + 1 == cfg.sweep.size()));

    std::vector<RateRow> rows_l2, rows_h1;
    FamilyResult smallest;
    for (size_t i = 0; i < jobs.size(); ++i) {
        FamilyResult fr = jobs[i].get();
        rep.sweep.push_back(cfg.sweep[i]);
        rep.err_l2.push_back(fr.err_l2);
        rep.err_h1dot.push_back(fr.err_h1dot);
        rep.err_h1.push_back(std::hypot(fr.err_l2, fr.err_h1dot));
        rows_l2.push_back({cfg.sweep[i], std::max(fr.err_l2, 1e-300)});
        rows_h1.push_back({cfg.sweep[i], std::max(fr.err_h1dot, 1e-300)});
        if (i + 1 == jobs.size()) smallest = std::move(fr);
    }

    rep.fit_l2 = fit_rate(rows_l2, RateModel::PurePower);
    rep.fit_h1dot = fit_rate(rows_h1, RateModel::PurePower);
    rep.fit_h1dot_log = fit_rate(rows_h1, RateModel::PowerWithLog);

    rep.s_T = cfg.measure_s_T
                  ? measured_regularity(reference.back().omega, fine_job.get())
                  : 1.0;
    rep.predicted_h1_exponent = rep.fit_l2.exponent * rep.s_T / (1.0 + rep.s_T);

    const double signal_l2 = *std::min_element(rep.err_l2.begin(), rep.err_l2.end());
    const double signal_h1 = *std::min_element(rep.err_h1dot.begin(), rep.err_h1dot.end());
    rep.reference_dominates = (10.0 * rep.self_convergence_l2 <= signal_l2) &&
                              (10.0 * rep.self_convergence_h1dot <= signal_h1);

    // Per-time Besov profile of the smallest-viscosity member at s_T.
    if (rep.s_T > 0.0 && !smallest.omegas.empty()) {
        DyadicFrame frame(1.0, g);
        rep.besov_profile.name = "besov_profile";
        for (size_t i = 0; i < smallest.omegas.size(); ++i) {
            const double v2 = besov_norm(smallest.omegas[i], rep.s_T, 2.0, frame);
            const double vp = besov_norm(smallest.omegas[i], rep.s_T, cfg.besov_p, frame);
            rep.besov_profile.t.push_back(smallest.times[i]);
            rep.besov_profile.value.push_back(std::max(v2, vp));
        }
    }
    return rep;
}

EmLimitReport run_em_limit_study(const EmLimitStudyConfig& cfg) {
    check_sweep(cfg.sweep, /*decreasing=*/false, "em limit study");
    const Grid2D& g = cfg.solver.grid;
    SpectralField w0 = make_initial_data(g, cfg.kind, cfg.data_params);
    SpectralField b0 = make_initial_data(g, cfg.b_kind, cfg.b_params);

    std::vector<MHDState> reference;
    solve_mhd_streaming(w0, b0, cfg.solver,
                        [&](const MHDState& s) { reference.push_back(s); });

    auto run_one = [&](double c) {
        EmLimitRun r;
        r.c = c;
        PlasmaConfig pc = cfg.solver;
        pc.c = c;
        EMState init(g);
        auto [u1, u2] = biot_savart(w0);
        init.u1 = std::move(u1);
        init.u2 = std::move(u2);
        init.b = b0;  // E0 = 0 for the limit study

        size_t idx = 0;
        double prev_t = 0.0;
        double prev_bh2 = 0.0, prev_j2 = 0.0, prev_amp2 = 0.0, prev_pg = 0.0;
        double acc_bh = 0.0, acc_j = 0.0, acc_amp = 0.0, acc_pg = 0.0;
        double e0 = 0.0;
        solve_em_streaming(init, pc, [&](const EMState& s, const EmDiagRow& d) {
            const MHDState& ref = reference.at(idx++);
            SpectralField d1 = s.u1 - ref.u1;
            SpectralField d2 = s.u2 - ref.u2;
            const double l2 = vec_l2(d1, d2);
            const double h1 = vec_h1dot(d1, d2);
            r.err_u_h1 = std::max(r.err_u_h1, std::hypot(l2, h1));

            SpectralField db = s.b - ref.b;
            r.err_b_l2 = std::max(r.err_b_l2, sobolev_norm(db, 0.0));
            const double bh = sobolev_norm(db, 1.0);

            auto [j1, j2] = ohm_current(s, pc);
            SpectralField r1 = j1 - ddy(ref.b);
            SpectralField r2 = j2 + ddx(ref.b);
            const double jn = vec_l2(r1, r2);

            const LorentzForcingDiag lf = lorentz_forcing_diag(s, pc);
            const double pg_h1 = std::hypot(lf.pg_l2, lf.pg_h1dot);

            if (idx == 1) {
                e0 = d.energy;
            } else {
                const double h = s.t - prev_t;
                acc_bh += 0.5 * h * (prev_bh2 + bh * bh);
                acc_j += 0.5 * h * (prev_j2 + jn * jn);
                acc_amp += 0.5 * h * (prev_amp2 + d.ampere_l2 * d.ampere_l2);
                acc_pg += 0.5 * h * (prev_pg + pg_h1);
            }
            if (e0 > 0.0)
                r.energy_violation =
                    std::max(r.energy_violation, (d.energy + d.dissipation - e0) / e0);
            prev_t = s.t;
            prev_bh2 = bh * bh;
            prev_j2 = jn * jn;
            prev_amp2 = d.ampere_l2 * d.ampere_l2;
            prev_pg = pg_h1;
        });
        r.err_b_h1dot_l2t = std::sqrt(acc_bh);
        r.err_j_l2t = std::sqrt(acc_j);
        r.ampere_l2t = std::sqrt(acc_amp);
        r.pg_h1_l1t = acc_pg;
        return r;
    };

    std::vector<std::future<EmLimitRun>> jobs;
    for (double c : cfg.sweep) jobs.push_back(std::async(std::launch::async, run_one, c));

    EmLimitReport rep;
    for (auto& j : jobs) rep.runs.push_back(j.get());

    std::vector<RateRow> rows_amp, rows_u;
    for (const EmLimitRun& r : rep.runs) {
        rows_amp.push_back({1.0 / r.c, std::max(r.ampere_l2t, 1e-300)});
        rows_u.push_back({1.0 / r.c, std::max(r.err_u_h1, 1e-300)});
    }
    for (size_t i = 1; i < rep.runs.size(); ++i) {
        const EmLimitRun& a = rep.runs[i - 1];
        const EmLimitRun& b = rep.runs[i];
        if (!(b.err_u_h1 < a.err_u_h1) || !(b.err_b_l2 < a.err_b_l2) ||
            !(b.err_b_h1dot_l2t < a.err_b_h1dot_l2t) || !(b.err_j_l2t < a.err_j_l2t))
            rep.monotone = false;
    }
    rep.fit_ampere = fit_rate(rows_amp, RateModel::PurePower);
    rep.fit_u_h1 = fit_rate(rows_u, RateModel::PurePower);
    return rep;
}

}  // namespace ylab
