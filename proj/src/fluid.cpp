#include "ylab/fluid.hpp"

#include <cmath>
#include <random>

namespace ylab {

namespace {

bool finite(const SpectralField& f) {
    for (const cdouble& c : f.coeffs())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

// d omega/dt without the diffusion term: -u.grad(omega) + curl g.
SpectralField transport_rhs(const SpectralField& omega, double t, const FluidConfig& cfg) {
    auto [u1, u2] = biot_savart(omega);
    SpectralField rhs = advect(u1, u2, omega);
    rhs *= -1.0;
    if (cfg.curl_forcing) {
        SpectralField g = cfg.curl_forcing(t);
        g.dealias();
        rhs += g;
    }
    return rhs;
}

SpectralField apply_diffusion_factor(const SpectralField& f, double nu_h) {
    if (nu_h == 0.0) return f;
    return apply_symbol(f, [nu_h](double kx, double ky) {
        return std::exp(-nu_h * (kx * kx + ky * ky));
    });
}

// Classical RK4 on the integrating-factor transformed equation.
void ifrk4_substep(SpectralField& w, double& t, double h, const FluidConfig& cfg) {
    const double nu = cfg.viscosity;
    const SpectralField wh = apply_diffusion_factor(w, nu * h / 2.0);

    const SpectralField k1 = transport_rhs(w, t, cfg);

    SpectralField a = w;
    a.add_scaled(k1, h / 2.0);
    a = apply_diffusion_factor(a, nu * h / 2.0);
    const SpectralField k2 = transport_rhs(a, t + h / 2.0, cfg);

    SpectralField b = wh;
    b.add_scaled(k2, h / 2.0);
    const SpectralField k3 = transport_rhs(b, t + h / 2.0, cfg);

    SpectralField c = wh;
    c.add_scaled(k3, h);
    c = apply_diffusion_factor(c, nu * h / 2.0);
    const SpectralField k4 = transport_rhs(c, t + h, cfg);

    SpectralField acc = w;
    acc.add_scaled(k1, h / 6.0);
    acc = apply_diffusion_factor(acc, nu * h);

    SpectralField mid = k2;
    mid += k3;
    mid *= h / 3.0;
    acc += apply_diffusion_factor(mid, nu * h / 2.0);
    acc.add_scaled(k4, h / 6.0);

    w = std::move(acc);
    t += h;
}

double max_speed(const SpectralField& omega) {
    auto [u1, u2] = biot_savart(omega);
    return max_magnitude(u1, u2);
}

// Advance one macro step of cfg.dt, choosing 2^m substeps from the CFL bound
// and rejecting (halving further) on a post-step CFL violation or blow-up.
void macro_step(SpectralField& w, double t0, const FluidConfig& cfg) {
    const double dx = cfg.grid.dx();
    const double tiny = 1e-14;
    int halvings = 0;
    const double u0 = max_speed(w);
    while (halvings <= 20 &&
           cfg.dt / std::ldexp(1.0, halvings) > cfg.cfl * dx / std::max(u0, tiny))
        ++halvings;

    for (; halvings <= 20; ++halvings) {
        SpectralField trial = w;
        double t = t0;
        const int nsub = 1 << halvings;
        const double h = cfg.dt / nsub;
        for (int i = 0; i < nsub; ++i) ifrk4_substep(trial, t, h, cfg);
        if (!finite(trial)) continue;
        const double u1 = max_speed(trial);
        if (h > cfg.cfl * dx / std::max(u1, tiny)) continue;  // reject, halve again
        w = std::move(trial);
        return;
    }
    throw SolverError("fluid step: CFL halving limit exceeded", t0);
}

DiagRow diagnostics_of(const FlowState& s) {
    DiagRow d;
    d.t = s.t;
    const double w2 = sobolev_norm(s.omega, 0.0);
    d.enstrophy = w2 * w2;
    const double e1 = sobolev_norm(s.u1, 0.0), e2 = sobolev_norm(s.u2, 0.0);
    d.energy = 0.5 * (e1 * e1 + e2 * e2);
    d.linf_vorticity = lp_norm(s.omega, kInf);
    const double h1 = sobolev_norm(s.u1, 1.0), h2 = sobolev_norm(s.u2, 1.0);
    d.h1_velocity = std::sqrt(h1 * h1 + h2 * h2);
    return d;
}

long long step_count(const FluidConfig& cfg) {
    const long long n = std::llround(cfg.t_final / cfg.dt);
    if (n < 1 || std::abs(n * cfg.dt - cfg.t_final) > 1e-9 * std::max(1.0, cfg.t_final))
        throw ConfigError("t_final must be a positive integer multiple of dt");
    return n;
}

}  // namespace

FlowState step(const FlowState& state, const FluidConfig& config) {
    SpectralField w = state.omega;
    macro_step(w, state.t, config);
    return FlowState(std::move(w), state.t + config.dt);
}

void solve_streaming(const SpectralField& omega0, const FluidConfig& config,
                     const SnapshotObserver& observer) {
    const long long nsteps = step_count(config);
    SpectralField w = omega0;
    w.dealias();
    w.set_mean_zero();
    {
        FlowState s0(w, 0.0);
        observer(s0, diagnostics_of(s0));
    }
    for (long long k = 1; k <= nsteps; ++k) {
        macro_step(w, (k - 1) * config.dt, config);
        if (k % config.snapshot_stride == 0 || k == nsteps) {
            FlowState s(w, k * config.dt);
            observer(s, diagnostics_of(s));
        }
    }
}

Trajectory solve(const SpectralField& omega0, const FluidConfig& config) {
    Trajectory traj;
    traj.config = config;
    solve_streaming(omega0, config, [&](const FlowState& s, const DiagRow& d) {
        traj.states.push_back(s);
        traj.diagnostics.push_back(d);
    });
    return traj;
}

double transport_bound_check(const Trajectory& traj, double p) {
    if (traj.states.empty()) throw InvalidArgument("transport_bound_check: empty trajectory");
    const double w0 = lp_norm(traj.states.front().omega, p);
    double forcing_accum = 0.0;
    double prev_norm = 0.0, prev_t = 0.0;
    if (traj.config.curl_forcing) prev_norm = lp_norm(traj.config.curl_forcing(0.0), p);
    double worst = 0.0;
    for (size_t i = 0; i < traj.states.size(); ++i) {
        const double t = traj.states[i].t;
        if (traj.config.curl_forcing && i > 0) {
            const double cur = lp_norm(traj.config.curl_forcing(t), p);
            forcing_accum += 0.5 * (t - prev_t) * (prev_norm + cur);
            prev_norm = cur;
        }
        prev_t = t;
        const double bound = w0 + forcing_accum;
        const double actual = lp_norm(traj.states[i].omega, p);
        if (bound > 0.0) worst = std::max(worst, (actual - bound) / bound);
    }
    return worst;
}

EnergyHfSeries highfreq_energy_identity(std::span<const FlowState> traj,
                                        const DyadicFrame& frame, const CurlForcing& forcing,
                                        double viscosity) {
    if (traj.size() < 2)
        throw InvalidArgument("highfreq_energy_identity: need at least 2 snapshots");
    const JSeries js = j_decomposition(traj, frame);

    const size_t nt = traj.size();
    std::vector<double> forcing_term(nt, 0.0), viscous_term(nt, 0.0);
    double f_prev = 0.0, v_prev = 0.0;
    for (size_t q = 0; q < nt; ++q) {
        SpectralField high = frame.highpass(traj[q].omega);
        double f_cur = 0.0;
        if (forcing) {
            SpectralField g = forcing(traj[q].t);
            g.dealias();
            f_cur = l2_inner(g, high);
        }
        double v_cur = 0.0;
        if (viscosity > 0.0) {
            const double hn =
                sobolev_norm(frame.low_pass(traj[q].omega, DyadicFrame::LowPass::SqrtIdMinusS0), 1.0);
            v_cur = viscosity * hn * hn;
        }
        if (q > 0) {
            const double h = traj[q].t - traj[q - 1].t;
            forcing_term[q] = forcing_term[q - 1] + 0.5 * h * (f_prev + f_cur);
            viscous_term[q] = viscous_term[q - 1] + 0.5 * h * (v_prev + v_cur);
        }
        f_prev = f_cur;
        v_prev = v_cur;
    }

    EnergyHfSeries out;
    out.t.resize(nt);
    out.lhs.resize(nt);
    out.rhs.resize(nt);
    out.residual.resize(nt);
    double lhs0 = 0.0;
    for (size_t q = 0; q < nt; ++q) {
        const double hn =
            sobolev_norm(frame.low_pass(traj[q].omega, DyadicFrame::LowPass::SqrtIdMinusS0), 0.0);
        out.t[q] = traj[q].t;
        out.lhs[q] = 0.5 * hn * hn;
        if (q == 0) lhs0 = out.lhs[0];
        out.rhs[q] = lhs0 + forcing_term[q] - viscous_term[q] - js.total[q];
        out.residual[q] =
            std::abs(out.lhs[q] - out.rhs[q]) / (std::abs(out.lhs[q]) + std::abs(out.rhs[q]) + 1e-300);
    }
    return out;
}

SpectralField make_initial_data(const Grid2D& grid, InitialData kind,
                                const InitialDataParams& params) {
    const double k1 = grid.wavenumber(1);
    SpectralField w(grid);
    switch (kind) {
        case InitialData::Shear: {
            w = from_callable(grid, [&](double x, double) {
                return params.amplitude * std::sin(k1 * x);
            });
            break;
        }
        case InitialData::TaylorGreen: {
            w = from_callable(grid, [&](double x, double y) {
                return 2.0 * params.amplitude * std::sin(k1 * x) * std::sin(k1 * y);
            });
            break;
        }
        case InitialData::SmoothRandom: {
            std::mt19937_64 rng(params.seed);
            std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
            const int lim = grid.dealias_limit();
            for (int mx = 0; mx <= lim; ++mx) {
                for (int my = (mx == 0 ? 1 : -lim); my <= lim; ++my) {
                    const double kk = std::hypot(grid.wavenumber(mx), grid.wavenumber(my));
                    const double amp =
                        params.amplitude * std::min(1.0, std::pow(kk, -params.spectrum_power));
                    const cdouble c = std::polar(amp, phase(rng));
                    w.mode(mx, my) = c;
                    w.mode(-mx, -my) = std::conj(c);
                }
            }
            break;
        }
        case InitialData::SmoothedPatch: {
            if (params.patch_delta < 2.0 * grid.dx())
                throw InvalidArgument(
                    "make_initial_data: patch_delta below grid resolution (need >= 2 dx)");
            const double cx =
                params.patch_center_x < 0.0 ? 0.5 * grid.length : params.patch_center_x;
            const double cy =
                params.patch_center_y < 0.0 ? 0.5 * grid.length : params.patch_center_y;
            // Seeded low-order boundary perturbation, scaled so the relative
            // radius modulation stays within patch_roughness.
            std::mt19937_64 rng(params.seed);
            std::uniform_real_distribution<double> coeff(-1.0, 1.0);
            std::vector<double> cm, sm;
            double norm = 0.0;
            for (int m = 2; m <= 6; ++m) {
                cm.push_back(coeff(rng));
                sm.push_back(coeff(rng));
                norm += std::abs(cm.back()) + std::abs(sm.back());
            }
            if (norm == 0.0) norm = 1.0;
            const double rough = params.patch_roughness;
            w = from_callable(grid, [&](double x, double y) {
                const double dxp = x - cx, dyp = y - cy;
                const double rho = std::hypot(dxp, dyp);
                double boundary = params.patch_radius;
                if (rough != 0.0 && rho > 0.0) {
                    const double th = std::atan2(dyp, dxp);
                    double mod = 0.0;
                    for (int m = 2; m <= 6; ++m)
                        mod += cm[m - 2] * std::cos(m * th) + sm[m - 2] * std::sin(m * th);
                    boundary *= 1.0 + rough * mod / norm;
                }
                return params.amplitude *
                       profiles::smooth_step((boundary - rho) / params.patch_delta + 0.5);
            });
            break;
        }
    }
    w.set_mean_zero();
    w.dealias();
    return w;
}

}  // namespace ylab
