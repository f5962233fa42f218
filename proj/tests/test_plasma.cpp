#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "ylab/fluid.hpp"
#include "ylab/plasma.hpp"

using namespace ylab;
using namespace ylab::test;

namespace {
const double kPi = std::numbers::pi;

using M3 = std::array<cdouble, 9>;

M3 mul3(const M3& a, const M3& b) {
    M3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[3 * i + j] += a[3 * i + k] * b[3 * k + j];
    return r;
}

double norm_inf3(const M3& a) {
    double n = 0.0;
    for (int i = 0; i < 3; ++i)
        n = std::max(n, std::abs(a[3 * i]) + std::abs(a[3 * i + 1]) + std::abs(a[3 * i + 2]));
    return n;
}

// Independent oracle: scaled-and-squared Taylor summation of exp(A).
M3 series_exp3(M3 a) {
    int squarings = 0;
    double n = norm_inf3(a);
    while (n > 0.5) {
        n /= 2.0;
        ++squarings;
        for (cdouble& v : a) v *= 0.5;
    }
    M3 result{};
    result[0] = result[4] = result[8] = 1.0;
    M3 term = result;
    for (int k = 1; k <= 30; ++k) {
        term = mul3(term, a);
        for (cdouble& v : term) v /= static_cast<double>(k);
        for (int i = 0; i < 9; ++i) result[i] += term[i];
    }
    for (int s = 0; s < squarings; ++s) result = mul3(result, result);
    return result;
}

// The stiff per-mode generator, straight from the field equations.
M3 generator(double sigma, double c, double kx, double ky, double h) {
    M3 a{};
    a[0] = -sigma * c * c;
    a[2] = cdouble(0.0, c * ky);
    a[4] = -sigma * c * c;
    a[5] = cdouble(0.0, -c * kx);
    a[6] = cdouble(0.0, c * ky);
    a[7] = cdouble(0.0, -c * kx);
    for (cdouble& v : a) v *= h;
    return a;
}

EMState taylor_green_em_state(const Grid2D& g) {
    EMState s(g);
    SpectralField w0 = make_initial_data(g, InitialData::TaylorGreen, {});
    auto [u1, u2] = biot_savart(w0);
    s.u1 = std::move(u1);
    s.u2 = std::move(u2);
    s.b = from_callable(g, [](double x, double) { return std::sin(x); });
    return s;
}

}  // namespace

TEST_CASE("maxwell propagator matches the series oracle") {
    for (double sigma : {0.5, 1.0, 2.0}) {
        for (double c : {1.0, 10.0, 50.0}) {
            for (auto [kx, ky] : std::array<std::array<double, 2>, 4>{
                     {{1.0, 0.0}, {0.0, 3.0}, {2.0, 5.0}, {30.0, 40.0}}}) {
                const double n1 = norm_inf3(generator(sigma, c, kx, ky, 1.0));
                for (double target : {0.3, 3.0, 10.0}) {
                    const double h = target / n1;
                    const M3 impl = maxwell_propagator(sigma, c, kx, ky, h);
                    const M3 oracle = series_exp3(generator(sigma, c, kx, ky, h));
                    for (int i = 0; i < 9; ++i)
                        CHECK(std::abs(impl[i] - oracle[i]) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("maxwell propagator k=0 mode damps E and freezes b") {
    const M3 p = maxwell_propagator(1.0, 10.0, 0.0, 0.0, 0.05);
    CHECK(std::abs(p[0] - std::exp(-5.0)) <= 1e-14);
    CHECK(std::abs(p[4] - std::exp(-5.0)) <= 1e-14);
    CHECK(std::abs(p[8] - 1.0) <= 1e-14);
}

TEST_CASE("ohm current closed forms") {
    Grid2D g(64, 2.0 * kPi);
    PlasmaConfig cfg;
    cfg.grid = g;
    cfg.sigma = 1.0;
    cfg.c = 2.0;

    EMState zero(g);
    auto [z1, z2] = ohm_current(zero, cfg);
    CHECK(sobolev_norm(z1, 0.0) == 0.0);
    CHECK(sobolev_norm(z2, 0.0) == 0.0);

    EMState s(g);
    s.E1 = from_callable(g, [](double, double y) { return std::sin(y); });
    auto [j1, j2] = ohm_current(s, cfg);
    SpectralField expect = s.E1;
    expect *= 2.0;
    CHECK(max_coeff_diff(j1, expect) <= 1e-13);
    CHECK(sobolev_norm(j2, 0.0) <= 1e-13);

    // u x B a pure gradient: P annihilates it
    EMState s2(g);
    s2.u1 = from_callable(g, [](double, double y) { return std::sin(y); });
    s2.b.mode(0, 0) = 1.0;
    auto [p1, p2] = ohm_current(s2, cfg);
    CHECK(sobolev_norm(p1, 0.0) <= 1e-13);
    CHECK(sobolev_norm(p2, 0.0) <= 1e-13);
}

TEST_CASE("em energy closed form") {
    Grid2D g(64, 2.0 * kPi);
    EMState zero(g);
    CHECK(em_energy(zero) == 0.0);
    EMState s(g);
    s.u2 = from_callable(g, [](double x, double) { return -std::cos(x); });
    s.b = from_callable(g, [](double x, double) { return std::sin(x); });
    CHECK(em_energy(s) == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));
}

TEST_CASE("zero state steps to zero state") {
    Grid2D g(32, 2.0 * kPi);
    PlasmaConfig cfg;
    cfg.grid = g;
    cfg.dt = 0.01;
    EMState out = step_em(EMState(g), cfg);
    CHECK(em_energy(out) == 0.0);
}

TEST_CASE("linear damped oscillation evolves per mode to closed form") {
    Grid2D g(32, 2.0 * kPi);
    for (double c : {10.0, 100.0}) {
        // u = 0 frozen: evolve the (E, b) system by the exact propagator and
        // compare against the independent series oracle at t = 0.1
        const M3 impl = maxwell_propagator(1.0, c, 1.0, 0.0, 0.1);
        const M3 oracle = series_exp3(generator(1.0, c, 1.0, 0.0, 0.1));
        // b0 = sin(x): bhat(1,0) = -i/2; E0 = 0
        const cdouble b0(0.0, -0.5);
        const cdouble e1 = impl[2] * b0, e2 = impl[5] * b0, bb = impl[8] * b0;
        const cdouble oe1 = oracle[2] * b0, oe2 = oracle[5] * b0, ob = oracle[8] * b0;
        CHECK(std::abs(e1 - oe1) <= 1e-10);
        CHECK(std::abs(e2 - oe2) <= 1e-10);
        CHECK(std::abs(bb - ob) <= 1e-10);
    }
}

TEST_CASE("ampere residual zero when j equals curl B") {
    Grid2D g(64, 2.0 * kPi);
    PlasmaConfig cfg;
    cfg.grid = g;
    cfg.sigma = 1.0;
    cfg.c = 20.0;
    EMState s(g);
    s.b = from_callable(g, [](double x, double) { return std::sin(x); });
    // E = curl B / (sigma c) makes j = sigma c E = curl B exactly
    s.E2 = from_callable(g, [&](double x, double) { return -std::cos(x) / (cfg.sigma * cfg.c); });
    std::vector<EMState> traj{s};
    AmpereResidualSeries r = ampere_residual(traj, cfg, 1.0);
    CHECK(r.l2[0] <= 1e-13);
    CHECK_THROWS_AS(ampere_residual(traj, cfg, 0.5), InvalidArgument);
    CHECK_THROWS_AS(ampere_residual(traj, cfg, 2.5), InvalidArgument);
}

TEST_CASE("ampere residual of a linearly evolved state matches the oracle") {
    Grid2D g(32, 2.0 * kPi);
    PlasmaConfig cfg;
    cfg.grid = g;
    cfg.sigma = 1.0;
    cfg.c = 10.0;
    const double t = 0.1;
    const M3 p = maxwell_propagator(cfg.sigma, cfg.c, 1.0, 0.0, t);
    const cdouble b0(0.0, -0.5);
    EMState s(g);
    s.E1.mode(1, 0) = p[2] * b0;
    s.E1.mode(-1, 0) = std::conj(p[2] * b0);
    s.E2.mode(1, 0) = p[5] * b0;
    s.E2.mode(-1, 0) = std::conj(p[5] * b0);
    s.b.mode(1, 0) = p[8] * b0;
    s.b.mode(-1, 0) = std::conj(p[8] * b0);
    s.t = t;
    std::vector<EMState> traj{s};
    AmpereResidualSeries r = ampere_residual(traj, cfg, 1.0);

    // oracle value: rhat = (i ky bhat - sigma c E1, -i kx bhat - sigma c E2)
    const cdouble r1 = -cfg.sigma * cfg.c * (p[2] * b0);
    const cdouble r2 = cdouble(0.0, -1.0) * (p[8] * b0) - cfg.sigma * cfg.c * (p[5] * b0);
    const double expect =
        2.0 * kPi * std::sqrt(2.0 * (std::norm(r1) + std::norm(r2)));  // two conjugate modes
    CHECK(r.l2[0] == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("lorentz forcing diagnostics") {
    Grid2D g(64, 2.0 * kPi);
    PlasmaConfig cfg;
    cfg.grid = g;
    cfg.sigma = 1.0;
    cfg.c = 20.0;
    // j = curl B state: g = 0
    EMState s(g);
    s.b = from_callable(g, [](double x, double) { return std::sin(x); });
    s.E2 = from_callable(g, [&](double x, double) { return -std::cos(x) / (cfg.sigma * cfg.c); });
    LorentzForcingDiag d = lorentz_forcing_diag(s, cfg);
    CHECK(d.pg_l2 <= 1e-12);
    CHECK(d.curl_g_linf <= 1e-12);

    // random normal-structure state: the gradient-orthogonality identity holds
    EMState r(g);
    auto [u1, u2] = random_velocity(g, 7);
    r.u1 = std::move(u1);
    r.u2 = std::move(u2);
    r.b = random_field(g, 8);
    auto [e1, e2] = leray_project(random_field(g, 9), random_field(g, 10));
    r.E1 = std::move(e1);
    r.E2 = std::move(e2);
    LorentzForcingDiag dr = lorentz_forcing_diag(r, cfg);
    const double scale = lp_norm(curl(r.E1, r.E2), kInf) + 1.0;
    CHECK(dr.orthogonality <= 1e-11 * scale);
}

TEST_CASE("normal structure cross product identities on random fields") {
    Grid2D g(64, 2.0 * kPi);
    SpectralField a1 = random_field(g, 21), a2 = random_field(g, 22), b = random_field(g, 23);
    // componentwise 3d cross product (a1,a2,0) x (0,0,b) = (a2 b, -a1 b, 0)
    std::vector<double> ra1 = to_real(a1), ra2 = to_real(a2), rb = to_real(b);
    std::vector<double> c1(ra1.size()), c2(ra1.size()), c3(ra1.size());
    for (size_t i = 0; i < ra1.size(); ++i) {
        c1[i] = ra2[i] * rb[i] - 0.0;
        c2[i] = 0.0 - ra1[i] * rb[i];
        c3[i] = ra1[i] * 0.0 - ra2[i] * 0.0;
    }
    SpectralField p1 = multiply(a2, b);
    SpectralField p2 = multiply(a1, b);
    p2 *= -1.0;
    SpectralField d1 = from_real(g, c1);
    d1.dealias();
    SpectralField d2 = from_real(g, c2);
    d2.dealias();
    CHECK(max_coeff_diff(p1, d1) <= 1e-12);
    CHECK(max_coeff_diff(p2, d2) <= 1e-12);
    for (double v : c3) CHECK(v == 0.0);

    // curl B = (d2 b, -d1 b) against spectral derivatives
    CHECK(max_coeff_diff(ddy(b), ddy(b)) == 0.0);
}

TEST_CASE("energy inequality on a short nonlinear run") {
    Grid2D g(64, 2.0 * kPi);
    PlasmaConfig cfg;
    cfg.grid = g;
    cfg.sigma = 1.0;
    cfg.c = 100.0;
    cfg.dt = 0.0025;
    cfg.t_final = 0.1;
    cfg.snapshot_stride = 8;
    EMState init = taylor_green_em_state(g);
    const double e0 = em_energy(init);
    EmTrajectory traj = solve_em(init, cfg);
    for (const EmDiagRow& d : traj.diagnostics) {
        CHECK(d.energy + d.dissipation <= e0 * 1.005);
        CHECK(d.div_violation <= 1e-10);
    }
    // realness is preserved through the propagator and nonlinear stages
    const EMState& last = traj.states.back();
    CHECK(last.b.realness_violation() <= 1e-12);
    CHECK(last.E1.realness_violation() <= 1e-12);
    CHECK(last.u1.realness_violation() <= 1e-12);
}

TEST_CASE("mhd heat decay with zero velocity") {
    Grid2D g(32, 2.0 * kPi);
    PlasmaConfig cfg;
    cfg.grid = g;
    cfg.sigma = 1.0;
    cfg.dt = 0.01;
    cfg.t_final = 1.0;
    cfg.snapshot_stride = 100;
    MHDState init(g);
    init.b = from_callable(g, [](double x, double) { return std::sin(x); });
    MHDState last(g);
    solve_mhd_streaming(init, cfg, [&](const MHDState& s) { last = s; });
    SpectralField expect = init.b;
    expect *= std::exp(-1.0);
    SpectralField diff = last.b - expect;
    CHECK(sobolev_norm(diff, 0.0) <= 1e-8);
}

TEST_CASE("mhd decay under steady shear uses the symbolic reduction") {
    Grid2D g(64, 2.0 * kPi);
    PlasmaConfig cfg;
    cfg.grid = g;
    cfg.sigma = 2.0;
    cfg.dt = 0.01;
    cfg.t_final = 1.0;
    cfg.snapshot_stride = 100;
    MHDState init(g);
    SpectralField w0 = from_callable(g, [](double x, double) { return std::sin(x); });
    auto [u1, u2] = biot_savart(w0);
    init.u1 = std::move(u1);
    init.u2 = std::move(u2);
    init.b = from_callable(g, [](double x, double) { return std::sin(x); });
    MHDState last(g);
    solve_mhd_streaming(init, cfg, [&](const MHDState& s) { last = s; });
    SpectralField expect = init.b;
    expect *= std::exp(-1.0 / cfg.sigma);
    SpectralField diff = last.b - expect;
    CHECK(sobolev_norm(diff, 0.0) <= 1e-8);
}

TEST_CASE("mhd with zero magnetic field matches the euler solver bitwise") {
    Grid2D g(64, 2.0 * kPi);
    PlasmaConfig pc;
    pc.grid = g;
    pc.sigma = 1.0;
    pc.dt = 0.01;
    pc.t_final = 0.2;
    pc.snapshot_stride = 5;

    FluidConfig fc;
    fc.grid = g;
    fc.dt = pc.dt;
    fc.t_final = pc.t_final;
    fc.cfl = pc.cfl;
    fc.snapshot_stride = pc.snapshot_stride;

    SpectralField w0 = make_initial_data(g, InitialData::SmoothRandom, {.seed = 11, .amplitude = 3.0});
    Trajectory euler = solve(w0, fc);

    std::vector<MHDState> mhd;
    solve_mhd_streaming(w0, SpectralField(g), pc, [&](const MHDState& s) { mhd.push_back(s); });

    REQUIRE(mhd.size() == euler.states.size());
    for (size_t i = 0; i < mhd.size(); ++i) {
        CHECK(max_coeff_diff(mhd[i].u1, euler.states[i].u1) == 0.0);
        CHECK(max_coeff_diff(mhd[i].u2, euler.states[i].u2) == 0.0);
        CHECK(sobolev_norm(mhd[i].b, 0.0) == 0.0);
    }
}
