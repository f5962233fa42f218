#include "ylab/plasma.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

namespace ylab {

namespace {

// ---------------------------------------------------------------------------
// Scalar phi functions, phi_0 = exp, phi_k(z) = (phi_{k-1}(z) - 1/(k-1)!)/z,
// evaluated stably: Taylor series for |z| <= 1, closed forms beyond.
// ---------------------------------------------------------------------------

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

cdouble phi_series(int k, cdouble z) {
    cdouble term = 1.0 / factorial(k);
    cdouble acc = term;
    for (int n = 1; n <= 30; ++n) {
        term *= z / static_cast<double>(n + k);
        acc += term;
    }
    return acc;
}

cdouble phi_scalar(int k, cdouble z) {
    if (k == 0) return std::exp(z);
    if (std::abs(z) <= 1.0) return phi_series(k, z);
    cdouble p = std::exp(z);
    for (int i = 1; i <= k; ++i) p = (p - 1.0 / factorial(i - 1)) / z;
    return p;
}

// First derivative via phi_k' = (phi_{k-1} - k phi_k)/z; series near zero
// (sum_n n z^{n-1}/(n+k)!).
cdouble phi_deriv(int k, cdouble z) {
    if (k == 0) return std::exp(z);
    if (std::abs(z) <= 1.0) {
        cdouble acc = 0.0;
        cdouble p = 1.0;
        for (int n = 1; n <= 30; ++n) {
            acc += static_cast<double>(n) * p / factorial(n + k);
            p *= z;
        }
        return acc;
    }
    return (phi_scalar(k - 1, z) - static_cast<double>(k) * phi_scalar(k, z)) / z;
}

// Third derivative through the recurrences d1, d2, d3 (valid away from 0).
cdouble phi_third(int k, cdouble z) {
    if (std::abs(z) <= 1.0) {
        cdouble acc = 0.0;
        cdouble p = 1.0;
        for (int n = 3; n <= 32; ++n) {
            const double w = static_cast<double>(n) * (n - 1) * (n - 2);
            acc += w * p / factorial(n + k);
            p *= z;
        }
        return acc;
    }
    cdouble f[6], d1[6], d2[6], d3[6];
    for (int i = 0; i <= k; ++i) f[i] = phi_scalar(i, z);
    d1[0] = f[0];
    for (int i = 1; i <= k; ++i) d1[i] = (f[i - 1] - static_cast<double>(i) * f[i]) / z;
    d2[0] = f[0];
    for (int i = 1; i <= k; ++i) d2[i] = (d1[i - 1] - static_cast<double>(i + 1) * d1[i]) / z;
    d3[0] = f[0];
    for (int i = 1; i <= k; ++i) d3[i] = (d2[i - 1] - static_cast<double>(i + 2) * d2[i]) / z;
    return d3[k];
}

// ---------------------------------------------------------------------------
// Functions of the 2x2 block M = [[-a, -i b], [-i b, 0]] (already scaled by h).
// (M - mu I)^2 = Delta^2 I with mu = -a/2 and Delta^2 = a^2/4 - b^2, so any
// analytic f gives f(M) = favg I + fdd (M - mu I).
// ---------------------------------------------------------------------------

struct Two {
    cdouble m00, m01, m10, m11;
};

double sinhc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 + x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sinh(x) / x;
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

Two exp2x2(double a, double b) {
    const double mu = -0.5 * a;
    const double disc = 0.25 * a * a - b * b;
    double ch, sc;
    if (disc >= 0.0) {
        const double d = std::sqrt(disc);
        ch = std::cosh(d);
        sc = sinhc(d);
    } else {
        const double d = std::sqrt(-disc);
        ch = std::cos(d);
        sc = sinc(d);
    }
    const double emu = std::exp(mu);
    Two out;
    out.m00 = emu * (ch + sc * (-0.5 * a));
    out.m01 = emu * sc * cdouble(0.0, -b);
    out.m10 = out.m01;
    out.m11 = emu * (ch + sc * (0.5 * a));
    return out;
}

Two mat_mul(const Two& x, const Two& y) {
    return {x.m00 * y.m00 + x.m01 * y.m10, x.m00 * y.m01 + x.m01 * y.m11,
            x.m10 * y.m00 + x.m11 * y.m10, x.m10 * y.m01 + x.m11 * y.m11};
}

Two phi2x2_series(int k, double a, double b) {
    const Two m{cdouble(-a, 0.0), cdouble(0.0, -b), cdouble(0.0, -b), cdouble(0.0, 0.0)};
    Two term{1.0 / factorial(k), 0.0, 0.0, 1.0 / factorial(k)};
    Two acc = term;
    for (int n = 1; n <= 30; ++n) {
        term = mat_mul(term, m);
        const double s = 1.0 / static_cast<double>(n + k);
        term.m00 *= s;
        term.m01 *= s;
        term.m10 *= s;
        term.m11 *= s;
        acc.m00 += term.m00;
        acc.m01 += term.m01;
        acc.m10 += term.m10;
        acc.m11 += term.m11;
    }
    return acc;
}

Two phi2x2(int k, double a, double b) {
    if (std::abs(a) + std::abs(b) <= 1.0) return phi2x2_series(k, a, b);
    const cdouble mu(-0.5 * a, 0.0);
    const cdouble delta = std::sqrt(cdouble(0.25 * a * a - b * b, 0.0));
    const cdouble lp = mu + delta, lm = mu - delta;
    const cdouble fp = phi_scalar(k, lp), fm = phi_scalar(k, lm);
    const cdouble favg = 0.5 * (fp + fm);
    cdouble fdd;
    if (std::abs(2.0 * delta) >= 1e-3 * (1.0 + std::abs(lp) + std::abs(lm))) {
        fdd = (fp - fm) / (2.0 * delta);
    } else {
        fdd = phi_deriv(k, mu) + phi_third(k, mu) * delta * delta / 6.0;
    }
    Two out;  // favg I + fdd (M - mu I)
    out.m00 = favg + fdd * cdouble(-0.5 * a, 0.0);
    out.m01 = fdd * cdouble(0.0, -b);
    out.m10 = out.m01;
    out.m11 = favg + fdd * cdouble(0.5 * a, 0.0);
    return out;
}

// ---------------------------------------------------------------------------
// Per-mode ETDRK4 coefficient tables. Everything depends on |k| only, so
// entries are stored per distinct integer m^2 = mx^2 + my^2.
// ---------------------------------------------------------------------------

struct ModeEntry {
    // g channel (gradient part of E): scalar coefficients at z = -sigma c^2 h
    cdouble g_e, g_e2, g_q, g_f1, g_f2, g_f3;
    // (e, b) channel 2x2 blocks
    Two e_full, e_half, q, f1, f2, f3;
};

struct EtdTables {
    double h = 0.0;
    std::vector<ModeEntry> entries;  // indexed by compact m2 index
};

struct GridModeIndex {
    std::vector<int> compact;    // mode -> compact index
    std::vector<double> kabs;    // compact index -> |k|
};

GridModeIndex build_mode_index(const Grid2D& g) {
    GridModeIndex mi;
    mi.compact.resize(static_cast<size_t>(g.size()));
    std::map<long long, int> seen;
    for (int i = 0; i < g.n; ++i) {
        const long long mx = g.freq(i);
        for (int j = 0; j < g.n; ++j) {
            const long long my = g.freq(j);
            const long long m2 = mx * mx + my * my;
            auto it = seen.find(m2);
            if (it == seen.end()) {
                it = seen.emplace(m2, static_cast<int>(mi.kabs.size())).first;
                mi.kabs.push_back(g.wavenumber(1) * std::sqrt(static_cast<double>(m2)));
            }
            mi.compact[static_cast<size_t>(i) * g.n + j] = it->second;
        }
    }
    return mi;
}

EtdTables build_tables(const GridModeIndex& mi, double sigma, double c, double h) {
    EtdTables t;
    t.h = h;
    const double a = sigma * c * c;
    t.entries.resize(mi.kabs.size());
    for (size_t q = 0; q < mi.kabs.size(); ++q) {
        const double beta = c * mi.kabs[q];
        ModeEntry& e = t.entries[q];
        const cdouble z(-a * h, 0.0);
        e.g_e = std::exp(z);
        e.g_e2 = std::exp(0.5 * z);
        e.g_q = 0.5 * h * phi_scalar(1, 0.5 * z);
        e.g_f1 = h * (phi_scalar(1, z) - 3.0 * phi_scalar(2, z) + 4.0 * phi_scalar(3, z));
        e.g_f2 = h * (phi_scalar(2, z) - 2.0 * phi_scalar(3, z));
        e.g_f3 = h * (4.0 * phi_scalar(3, z) - phi_scalar(2, z));

        e.e_full = exp2x2(a * h, beta * h);
        e.e_half = exp2x2(0.5 * a * h, 0.5 * beta * h);
        e.q = phi2x2(1, 0.5 * a * h, 0.5 * beta * h);
        const double hh = 0.5 * h;
        e.q.m00 *= hh;
        e.q.m01 *= hh;
        e.q.m10 *= hh;
        e.q.m11 *= hh;
        const Two p1 = phi2x2(1, a * h, beta * h);
        const Two p2 = phi2x2(2, a * h, beta * h);
        const Two p3 = phi2x2(3, a * h, beta * h);
        auto combine = [h](const Two& x1, double w1, const Two& x2, double w2, const Two& x3,
                           double w3) {
            Two r;
            r.m00 = h * (w1 * x1.m00 + w2 * x2.m00 + w3 * x3.m00);
            r.m01 = h * (w1 * x1.m01 + w2 * x2.m01 + w3 * x3.m01);
            r.m10 = h * (w1 * x1.m10 + w2 * x2.m10 + w3 * x3.m10);
            r.m11 = h * (w1 * x1.m11 + w2 * x2.m11 + w3 * x3.m11);
            return r;
        };
        e.f1 = combine(p1, 1.0, p2, -3.0, p3, 4.0);
        e.f2 = combine(p1, 0.0, p2, 1.0, p3, -2.0);
        e.f3 = combine(p1, 0.0, p2, -1.0, p3, 4.0);
    }
    return t;
}

// ---------------------------------------------------------------------------
// The EM integrator: state in spectral space, linear part applied via tables
// in the (grad, perp, b) channel basis, nonlinear part via ETDRK4 stages.
// ---------------------------------------------------------------------------

struct EmFields {
    SpectralField u1, u2, E1, E2, b;
};

enum class LinOp { Full, Half, Q, F1, F2, F3 };

class EmIntegrator {
  public:
    EmIntegrator(const PlasmaConfig& cfg) : cfg_(cfg), mi_(build_mode_index(cfg.grid)) {}

    // One macro step with CFL halving; updates the dissipation accumulator.
    void macro_step(EmFields& y, double t0);

    double dissipation() const { return dissipation_; }

  private:
    const EtdTables& tables_for(double h) {
        auto it = cache_.find(h);
        if (it == cache_.end())
            it = cache_.emplace(h, build_tables(mi_, cfg_.sigma, cfg_.c, h)).first;
        return it->second;
    }

    void substep(EmFields& y, double h);
    EmFields nonlinear(const EmFields& y) const;
    void apply_linear(const EtdTables& t, LinOp op, const EmFields& in, EmFields& out) const;
    double current_norm2(const EmFields& y) const;

    PlasmaConfig cfg_;
    GridModeIndex mi_;
    std::map<double, EtdTables> cache_;
    double dissipation_ = 0.0;
};

void pick(const ModeEntry& e, LinOp op, cdouble& gs, Two& m, double& uscal, double h) {
    switch (op) {
        case LinOp::Full: gs = e.g_e; m = e.e_full; uscal = 1.0; break;
        case LinOp::Half: gs = e.g_e2; m = e.e_half; uscal = 1.0; break;
        case LinOp::Q: gs = e.g_q; m = e.q; uscal = 0.5 * h; break;
        case LinOp::F1: gs = e.g_f1; m = e.f1; uscal = h / 6.0; break;
        case LinOp::F2: gs = e.g_f2; m = e.f2; uscal = h / 6.0; break;
        case LinOp::F3: default: gs = e.g_f3; m = e.f3; uscal = h / 6.0; break;
    }
}

void EmIntegrator::apply_linear(const EtdTables& t, LinOp op, const EmFields& in,
                                EmFields& out) const {
    const Grid2D& g = cfg_.grid;
    out.u1 = in.u1;
    out.u2 = in.u2;
    out.E1 = SpectralField(g);
    out.E2 = SpectralField(g);
    out.b = SpectralField(g);
    double uscal = 1.0;
    for (int i = 0; i < g.n; ++i) {
        const double kx = g.wavenumber(g.freq(i));
        for (int j = 0; j < g.n; ++j) {
            const double ky = g.wavenumber(g.freq(j));
            const ModeEntry& e =
                t.entries[static_cast<size_t>(mi_.compact[static_cast<size_t>(i) * g.n + j])];
            cdouble gs;
            Two m;
            pick(e, op, gs, m, uscal, t.h);
            const cdouble a = in.E1.at(i, j), bb = in.E2.at(i, j), w = in.b.at(i, j);
            const double kk = std::hypot(kx, ky);
            if (kk == 0.0) {
                out.E1.at(i, j) = gs * a;
                out.E2.at(i, j) = gs * bb;
                out.b.at(i, j) = m.m11 * w;
                continue;
            }
            const double ux = kx / kk, uy = ky / kk;    // khat
            const double px = -uy, py = ux;             // khat_perp
            const cdouble gpart = ux * a + uy * bb;
            const cdouble epart = px * a + py * bb;
            const cdouble gnew = gs * gpart;
            const cdouble enew = m.m00 * epart + m.m01 * w;
            const cdouble bnew = m.m10 * epart + m.m11 * w;
            out.E1.at(i, j) = ux * gnew + px * enew;
            out.E2.at(i, j) = uy * gnew + py * enew;
            out.b.at(i, j) = bnew;
        }
    }
    out.E1.zero_nyquist();
    out.E2.zero_nyquist();
    out.b.zero_nyquist();
    out.u1 *= uscal;
    out.u2 *= uscal;
}

// Nonlinear terms: advection + Lorentz force on u, the u-dependent Ohm source
// on E, nothing on b (Faraday is fully linear).
EmFields EmIntegrator::nonlinear(const EmFields& y) const {
    const double sg = cfg_.sigma, c = cfg_.c;
    // P(u x B) with u x B = (u2 b, -u1 b)
    SpectralField p1 = multiply(y.u2, y.b);
    SpectralField p2 = multiply(y.u1, y.b);
    p2 *= -1.0;
    auto [pp1, pp2] = leray_project(p1, p2);
    // j = sigma (c E + P(u x B))
    SpectralField j1 = y.E1;
    j1 *= c;
    j1 += pp1;
    j1 *= sg;
    SpectralField j2 = y.E2;
    j2 *= c;
    j2 += pp2;
    j2 *= sg;
    // Lorentz force j x B = (j2 b, -j1 b)
    SpectralField l1 = multiply(j2, y.b);
    SpectralField l2 = multiply(j1, y.b);
    l2 *= -1.0;
    // advection
    SpectralField a1 = advect(y.u1, y.u2, y.u1);
    SpectralField a2 = advect(y.u1, y.u2, y.u2);
    l1 -= a1;
    l2 -= a2;
    auto [nu1, nu2] = leray_project(l1, l2);

    EmFields n;
    n.u1 = std::move(nu1);
    n.u2 = std::move(nu2);
    n.E1 = std::move(pp1);
    n.E1 *= -sg * c;
    n.E2 = std::move(pp2);
    n.E2 *= -sg * c;
    n.b = SpectralField(cfg_.grid);
    return n;
}

double EmIntegrator::current_norm2(const EmFields& y) const {
    EMState s;
    s.u1 = y.u1;
    s.u2 = y.u2;
    s.E1 = y.E1;
    s.E2 = y.E2;
    s.b = y.b;
    auto [j1, j2] = ohm_current(s, cfg_);
    const double n1 = sobolev_norm(j1, 0.0), n2 = sobolev_norm(j2, 0.0);
    return n1 * n1 + n2 * n2;
}

void axpy(EmFields& y, const EmFields& x, double s) {
    y.u1.add_scaled(x.u1, s);
    y.u2.add_scaled(x.u2, s);
    y.E1.add_scaled(x.E1, s);
    y.E2.add_scaled(x.E2, s);
    y.b.add_scaled(x.b, s);
}

void EmIntegrator::substep(EmFields& y, double h) {
    const EtdTables& t = tables_for(h);
    const double diss_start = current_norm2(y);

    EmFields n1 = nonlinear(y);

    EmFields a, tmp;
    apply_linear(t, LinOp::Half, y, a);      // E2 y
    apply_linear(t, LinOp::Q, n1, tmp);      // Q N1
    axpy(a, tmp, 1.0);
    EmFields n2 = nonlinear(a);

    EmFields bstage;
    apply_linear(t, LinOp::Half, y, bstage);
    apply_linear(t, LinOp::Q, n2, tmp);
    axpy(bstage, tmp, 1.0);
    EmFields n3 = nonlinear(bstage);

    EmFields cstage;
    apply_linear(t, LinOp::Half, a, cstage);  // E2 a
    EmFields scratch = n3;
    axpy(scratch, n3, 1.0);   // 2 N3
    axpy(scratch, n1, -1.0);  // 2 N3 - N1
    apply_linear(t, LinOp::Q, scratch, tmp);
    axpy(cstage, tmp, 1.0);
    EmFields n4 = nonlinear(cstage);

    EmFields ynew;
    apply_linear(t, LinOp::Full, y, ynew);
    apply_linear(t, LinOp::F1, n1, tmp);
    axpy(ynew, tmp, 1.0);
    EmFields n23 = n2;
    axpy(n23, n3, 1.0);
    apply_linear(t, LinOp::F2, n23, tmp);
    axpy(ynew, tmp, 2.0);
    apply_linear(t, LinOp::F3, n4, tmp);
    axpy(ynew, tmp, 1.0);

    // Constraint cleanup and dealiasing drift control.
    auto [pu1, pu2] = leray_project(ynew.u1, ynew.u2);
    ynew.u1 = std::move(pu1);
    ynew.u2 = std::move(pu2);
    auto [pe1, pe2] = leray_project(ynew.E1, ynew.E2);
    ynew.E1 = std::move(pe1);
    ynew.E2 = std::move(pe2);

    y = std::move(ynew);
    const double diss_end = current_norm2(y);
    dissipation_ += 0.5 * h * (2.0 / cfg_.sigma) * (diss_start + diss_end);
}

bool finite(const EmFields& y) {
    for (const SpectralField* f : {&y.u1, &y.u2, &y.E1, &y.E2, &y.b})
        for (const cdouble& c : f->coeffs())
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

void EmIntegrator::macro_step(EmFields& y, double t0) {
    const double dx = cfg_.grid.dx();
    const double tiny = 1e-14;
    const double u0 = max_magnitude(y.u1, y.u2);
    int halvings = 0;
    while (halvings <= 20 &&
           cfg_.dt / std::ldexp(1.0, halvings) > cfg_.cfl * dx / std::max(u0, tiny))
        ++halvings;

    for (; halvings <= 20; ++halvings) {
        EmFields trial = y;
        const double diss_saved = dissipation_;
        const int nsub = 1 << halvings;
        const double h = cfg_.dt / nsub;
        for (int i = 0; i < nsub; ++i) substep(trial, h);
        if (!finite(trial)) {
            dissipation_ = diss_saved;
            continue;
        }
        const double u1 = max_magnitude(trial.u1, trial.u2);
        if (h > cfg_.cfl * dx / std::max(u1, tiny)) {
            dissipation_ = diss_saved;
            continue;
        }
        y = std::move(trial);
        return;
    }
    throw SolverError("plasma step: CFL halving limit exceeded", t0);
}

double div_violation(const SpectralField& v1, const SpectralField& v2) {
    const Grid2D& g = v1.grid();
    double worst = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double kx = g.wavenumber(g.freq(i));
        for (int j = 0; j < g.n; ++j) {
            const double ky = g.wavenumber(g.freq(j));
            const cdouble a = v1.at(i, j), b = v2.at(i, j);
            const double amp = std::abs(a) + std::abs(b);
            if (amp > 0.0) worst = std::max(worst, std::abs(kx * a + ky * b) / amp);
        }
    }
    return worst;
}

EmDiagRow em_diagnostics(const EMState& s, const PlasmaConfig& cfg, double dissip) {
    EmDiagRow d;
    d.t = s.t;
    d.energy = em_energy(s);
    d.dissipation = dissip;
    auto [j1, j2] = ohm_current(s, cfg);
    SpectralField r1 = ddy(s.b);
    r1 -= j1;
    SpectralField r2 = ddx(s.b);
    r2 *= -1.0;
    r2 -= j2;
    const double a1 = sobolev_norm(r1, 0.0), a2 = sobolev_norm(r2, 0.0);
    d.ampere_l2 = std::sqrt(a1 * a1 + a2 * a2);
    const LorentzForcingDiag lf = lorentz_forcing_diag(s, cfg);
    d.pg_l2 = lf.pg_l2;
    d.curl_g_linf = lf.curl_g_linf;
    d.div_violation = std::max(div_violation(s.u1, s.u2), div_violation(s.E1, s.E2));
    return d;
}

long long plasma_step_count(const PlasmaConfig& cfg) {
    const long long n = std::llround(cfg.t_final / cfg.dt);
    if (n < 1 || std::abs(n * cfg.dt - cfg.t_final) > 1e-9 * std::max(1.0, cfg.t_final))
        throw ConfigError("t_final must be a positive integer multiple of dt");
    return n;
}

EmFields fields_of(const EMState& s) {
    EmFields y;
    y.u1 = s.u1;
    y.u2 = s.u2;
    y.E1 = s.E1;
    y.E2 = s.E2;
    y.b = s.b;
    return y;
}

EMState state_of(const EmFields& y, double t) {
    EMState s;
    s.u1 = y.u1;
    s.u2 = y.u2;
    s.E1 = y.E1;
    s.E2 = y.E2;
    s.b = y.b;
    s.t = t;
    return s;
}

}  // namespace

std::pair<SpectralField, SpectralField> ohm_current(const EMState& s, const PlasmaConfig& cfg) {
    SpectralField p1 = multiply(s.u2, s.b);
    SpectralField p2 = multiply(s.u1, s.b);
    p2 *= -1.0;
    auto [pp1, pp2] = leray_project(p1, p2);
    SpectralField j1 = s.E1;
    j1 *= cfg.c;
    j1 += pp1;
    j1 *= cfg.sigma;
    SpectralField j2 = s.E2;
    j2 *= cfg.c;
    j2 += pp2;
    j2 *= cfg.sigma;
    return {std::move(j1), std::move(j2)};
}

double em_energy(const EMState& s) {
    double acc = 0.0;
    for (const SpectralField* f : {&s.u1, &s.u2, &s.E1, &s.E2, &s.b}) {
        const double n = sobolev_norm(*f, 0.0);
        acc += n * n;
    }
    return acc;
}

std::array<cdouble, 9> maxwell_propagator(double sigma, double c, double kx, double ky,
                                          double h) {
    if (!(sigma > 0.0) || !(c > 0.0)) throw InvalidArgument("maxwell_propagator: need sigma, c > 0");
    const double a = sigma * c * c;
    std::array<cdouble, 9> m{};
    const double kk = std::hypot(kx, ky);
    if (kk == 0.0) {
        m[0] = std::exp(-a * h);
        m[4] = std::exp(-a * h);
        m[8] = 1.0;
        return m;
    }
    const Two p = exp2x2(a * h, c * kk * h);
    const cdouble gs = std::exp(-a * h);
    const double ux = kx / kk, uy = ky / kk;
    const double px = -uy, py = ux;
    m[0] = gs * ux * ux + p.m00 * px * px;
    m[1] = gs * ux * uy + p.m00 * px * py;
    m[2] = p.m01 * px;
    m[3] = gs * uy * ux + p.m00 * py * px;
    m[4] = gs * uy * uy + p.m00 * py * py;
    m[5] = p.m01 * py;
    m[6] = p.m10 * px;
    m[7] = p.m10 * py;
    m[8] = p.m11;
    return m;
}

EMState step_em(const EMState& s, const PlasmaConfig& cfg) {
    EmIntegrator integ(cfg);
    EmFields y = fields_of(s);
    integ.macro_step(y, s.t);
    return state_of(y, s.t + cfg.dt);
}

void solve_em_streaming(const EMState& init, const PlasmaConfig& cfg, const EmObserver& obs) {
    if (!(cfg.sigma > 0.0) || !(cfg.c > 0.0))
        throw ConfigError("plasma: sigma and c must be > 0");
    const long long nsteps = plasma_step_count(cfg);
    EmIntegrator integ(cfg);
    EmFields y = fields_of(init);
    for (SpectralField* f : {&y.u1, &y.u2, &y.E1, &y.E2, &y.b}) f->dealias();
    {
        auto [pu1, pu2] = leray_project(y.u1, y.u2);
        y.u1 = std::move(pu1);
        y.u2 = std::move(pu2);
        auto [pe1, pe2] = leray_project(y.E1, y.E2);
        y.E1 = std::move(pe1);
        y.E2 = std::move(pe2);
    }
    {
        EMState s0 = state_of(y, 0.0);
        obs(s0, em_diagnostics(s0, cfg, 0.0));
    }
    for (long long k = 1; k <= nsteps; ++k) {
        integ.macro_step(y, (k - 1) * cfg.dt);
        if (k % cfg.snapshot_stride == 0 || k == nsteps) {
            EMState s = state_of(y, k * cfg.dt);
            obs(s, em_diagnostics(s, cfg, integ.dissipation()));
        }
    }
}

EmTrajectory solve_em(const EMState& init, const PlasmaConfig& cfg) {
    EmTrajectory traj;
    traj.config = cfg;
    solve_em_streaming(init, cfg, [&](const EMState& s, const EmDiagRow& d) {
        traj.states.push_back(s);
        traj.diagnostics.push_back(d);
    });
    return traj;
}

// ---------------------------------------------------------------------------
// MHD: u decouples (normal-structure Lorentz force is a pure gradient), b is
// advected and diffused. The omega path mirrors the fluid IFRK4 substep
// operation for operation so a b = 0 run reproduces the Euler solver bitwise.
// ---------------------------------------------------------------------------

namespace {

SpectralField mhd_b_factor(const SpectralField& f, double nu_h) {
    if (nu_h == 0.0) return f;
    return apply_symbol(f, [nu_h](double kx, double ky) {
        return std::exp(-nu_h * (kx * kx + ky * ky));
    });
}

void mhd_substep(SpectralField& w, SpectralField& bf, double& t, double h, double sigma) {
    const double nu_b = 1.0 / sigma;

    auto stage = [](const SpectralField& omega, const SpectralField& bb)
        -> std::array<SpectralField, 2> {
        auto [u1, u2] = biot_savart(omega);
        SpectralField kw = advect(u1, u2, omega);
        kw *= -1.0;
        SpectralField kb = advect(u1, u2, bb);
        kb *= -1.0;
        return {std::move(kw), std::move(kb)};
    };

    const SpectralField bh = mhd_b_factor(bf, nu_b * h / 2.0);

    auto [k1w, k1b] = stage(w, bf);

    SpectralField aw = w;
    aw.add_scaled(k1w, h / 2.0);
    SpectralField ab = bf;
    ab.add_scaled(k1b, h / 2.0);
    ab = mhd_b_factor(ab, nu_b * h / 2.0);
    auto [k2w, k2b] = stage(aw, ab);

    SpectralField bw = w;
    bw.add_scaled(k2w, h / 2.0);
    SpectralField bb = bh;
    bb.add_scaled(k2b, h / 2.0);
    auto [k3w, k3b] = stage(bw, bb);

    SpectralField cw = w;
    cw.add_scaled(k3w, h);
    SpectralField cb = bh;
    cb.add_scaled(k3b, h);
    cb = mhd_b_factor(cb, nu_b * h / 2.0);
    auto [k4w, k4b] = stage(cw, cb);

    SpectralField accw = w;
    accw.add_scaled(k1w, h / 6.0);
    SpectralField midw = k2w;
    midw += k3w;
    midw *= h / 3.0;
    accw += midw;
    accw.add_scaled(k4w, h / 6.0);

    SpectralField accb = bf;
    accb.add_scaled(k1b, h / 6.0);
    accb = mhd_b_factor(accb, nu_b * h);
    SpectralField midb = k2b;
    midb += k3b;
    midb *= h / 3.0;
    accb += mhd_b_factor(midb, nu_b * h / 2.0);
    accb.add_scaled(k4b, h / 6.0);

    w = std::move(accw);
    bf = std::move(accb);
    t += h;
}

void mhd_macro_step(SpectralField& w, SpectralField& bf, double t0, const PlasmaConfig& cfg) {
    const double dx = cfg.grid.dx();
    const double tiny = 1e-14;
    double u0;
    {
        auto [u1, u2] = biot_savart(w);
        u0 = max_magnitude(u1, u2);
    }
    int halvings = 0;
    while (halvings <= 20 &&
           cfg.dt / std::ldexp(1.0, halvings) > cfg.cfl * dx / std::max(u0, tiny))
        ++halvings;

    for (; halvings <= 20; ++halvings) {
        SpectralField tw = w, tb = bf;
        double t = t0;
        const int nsub = 1 << halvings;
        const double h = cfg.dt / nsub;
        for (int i = 0; i < nsub; ++i) mhd_substep(tw, tb, t, h, cfg.sigma);
        bool ok = true;
        for (const cdouble& c : tw.coeffs())
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) ok = false;
        for (const cdouble& c : tb.coeffs())
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) ok = false;
        if (!ok) continue;
        double u1m;
        {
            auto [u1, u2] = biot_savart(tw);
            u1m = max_magnitude(u1, u2);
        }
        if (h > cfg.cfl * dx / std::max(u1m, tiny)) continue;
        w = std::move(tw);
        bf = std::move(tb);
        return;
    }
    throw SolverError("mhd step: CFL halving limit exceeded", t0);
}

}  // namespace

MHDState step_mhd(const MHDState& s, const PlasmaConfig& cfg) {
    SpectralField w = curl(s.u1, s.u2);
    SpectralField bf = s.b;
    mhd_macro_step(w, bf, s.t, cfg);
    MHDState out;
    auto [u1, u2] = biot_savart(w);
    out.u1 = std::move(u1);
    out.u2 = std::move(u2);
    out.b = std::move(bf);
    out.t = s.t + cfg.dt;
    return out;
}

void solve_mhd_streaming(const MHDState& init, const PlasmaConfig& cfg, const MhdObserver& obs) {
    solve_mhd_streaming(curl(init.u1, init.u2), init.b, cfg, obs);
}

void solve_mhd_streaming(const SpectralField& omega0, const SpectralField& b0,
                         const PlasmaConfig& cfg, const MhdObserver& obs) {
    if (!(cfg.sigma > 0.0)) throw ConfigError("mhd: sigma must be > 0");
    const long long nsteps = plasma_step_count(cfg);
    SpectralField w = omega0;
    w.dealias();
    w.set_mean_zero();
    SpectralField bf = b0;
    bf.dealias();
    auto emit = [&](double t) {
        MHDState s;
        auto [u1, u2] = biot_savart(w);
        s.u1 = std::move(u1);
        s.u2 = std::move(u2);
        s.b = bf;
        s.t = t;
        obs(s);
    };
    emit(0.0);
    for (long long k = 1; k <= nsteps; ++k) {
        mhd_macro_step(w, bf, (k - 1) * cfg.dt, cfg);
        if (k % cfg.snapshot_stride == 0 || k == nsteps) emit(k * cfg.dt);
    }
}

AmpereResidualSeries ampere_residual(std::span<const EMState> traj, const PlasmaConfig& cfg,
                                     double eta) {
    if (eta < 1.0 || eta > 2.0)
        throw InvalidArgument("ampere_residual: eta must lie in [1, 2]");
    AmpereResidualSeries out;
    for (const EMState& s : traj) {
        auto [j1, j2] = ohm_current(s, cfg);
        SpectralField r1 = ddy(s.b);
        r1 -= j1;
        SpectralField r2 = ddx(s.b);
        r2 *= -1.0;
        r2 -= j2;
        const double a1 = sobolev_norm(r1, 0.0), a2 = sobolev_norm(r2, 0.0);
        const double h1 = sobolev_norm(r1, eta - 1.0), h2 = sobolev_norm(r2, eta - 1.0);
        out.t.push_back(s.t);
        out.l2.push_back(std::sqrt(a1 * a1 + a2 * a2));
        out.hs.push_back(std::sqrt(h1 * h1 + h2 * h2));
    }
    double acc = 0.0;
    for (size_t i = 1; i < out.t.size(); ++i)
        acc += 0.5 * (out.t[i] - out.t[i - 1]) *
               (out.l2[i - 1] * out.l2[i - 1] + out.l2[i] * out.l2[i]);
    out.l2_time_integrated = std::sqrt(acc);
    return out;
}

LorentzForcingDiag lorentz_forcing_diag(const EMState& s, const PlasmaConfig& cfg) {
    auto [j1, j2] = ohm_current(s, cfg);
    // a = j - curl B
    SpectralField a1 = j1;
    a1 -= ddy(s.b);
    SpectralField a2 = j2;
    a2 += ddx(s.b);
    // g = a x B = (a2 b, -a1 b)
    SpectralField g1 = multiply(a2, s.b);
    SpectralField g2 = multiply(a1, s.b);
    g2 *= -1.0;
    auto [pg1, pg2] = leray_project(g1, g2);

    LorentzForcingDiag d;
    const double p1 = sobolev_norm(pg1, 0.0), p2 = sobolev_norm(pg2, 0.0);
    d.pg_l2 = std::sqrt(p1 * p1 + p2 * p2);
    const double q1 = sobolev_norm(pg1, 1.0), q2 = sobolev_norm(pg2, 1.0);
    d.pg_h1dot = std::sqrt(q1 * q1 + q2 * q2);
    const SpectralField cg = curl(g1, g2);
    d.curl_g_linf = lp_norm(cg, kInf);
    // curl g should equal -j.grad b exactly; the (curl B).grad b part cancels.
    SpectralField jd = advect(j1, j2, s.b);
    SpectralField check = cg;
    check += jd;
    d.orthogonality = lp_norm(check, kInf);
    return d;
}

}  // namespace ylab
