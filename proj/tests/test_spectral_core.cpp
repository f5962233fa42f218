#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "test_support.hpp"
#include "ylab/ops.hpp"

using namespace ylab;
using namespace ylab::test;

namespace {
const double kPi = std::numbers::pi;
Grid2D small_grid() { return Grid2D(64, 2.0 * kPi); }
}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid2D(6, 1.0), ConfigError);
    CHECK_THROWS_AS(Grid2D(48, 1.0), ConfigError);
    CHECK_THROWS_AS(Grid2D(64, 0.0), ConfigError);
    Grid2D g(64, 2.0 * kPi);
    CHECK(g.freq(0) == 0);
    CHECK(g.freq(31) == 31);
    CHECK(g.freq(32) == -32);
    CHECK(g.freq(63) == -1);
    CHECK(g.dealias_limit() == 21);
}

TEST_CASE("transform round trip on random real fields") {
    Grid2D g = small_grid();
    for (std::uint64_t seed : {1, 2, 3}) {
        SpectralField f = random_field(g, seed);
        SpectralField back = from_real(g, to_real(f));
        CHECK(max_coeff_diff(f, back) < 1e-12);
        CHECK(f.realness_violation() < 1e-12);
    }
}

TEST_CASE("single mode transforms exactly") {
    Grid2D g = small_grid();
    SpectralField f = from_callable(g, [](double x, double) { return std::sin(x); });
    CHECK(std::abs(f.mode(1, 0) - cdouble(0.0, -0.5)) < 1e-14);
    CHECK(std::abs(f.mode(-1, 0) - cdouble(0.0, 0.5)) < 1e-14);
}

TEST_CASE("biot_savart zero case") {
    Grid2D g = small_grid();
    SpectralField zero(g);
    auto [u1, u2] = biot_savart(zero);
    CHECK(sobolev_norm(u1, 0.0) == 0.0);
    CHECK(sobolev_norm(u2, 0.0) == 0.0);
}

TEST_CASE("biot_savart single mode closed forms") {
    Grid2D g = small_grid();
    // omega = sin(x): stream function psi = -sin(x), u = (0, -cos(x))
    SpectralField w = from_callable(g, [](double x, double) { return std::sin(x); });
    auto [u1, u2] = biot_savart(w);
    SpectralField expect2 = from_callable(g, [](double x, double) { return -std::cos(x); });
    CHECK(sobolev_norm(u1, 0.0) < 1e-12);
    CHECK(max_coeff_diff(u2, expect2) < 1e-12);
    // curl u reproduces omega
    CHECK(max_coeff_diff(curl(u1, u2), w) < 1e-12);

    // omega = cos(y) -> u = (-sin(y), 0)
    SpectralField w2 = from_callable(g, [](double, double y) { return std::cos(y); });
    auto [v1, v2] = biot_savart(w2);
    SpectralField expect1 = from_callable(g, [](double, double y) { return -std::sin(y); });
    CHECK(max_coeff_diff(v1, expect1) < 1e-12);
    CHECK(sobolev_norm(v2, 0.0) < 1e-12);
}

TEST_CASE("biot_savart output satisfies FlowState invariants") {
    Grid2D g = small_grid();
    for (std::uint64_t seed : {7, 8, 9}) {
        FlowState s(random_field(g, seed), 0.0);
        CHECK(flow_state_violation(s) < 1e-12);
    }
}

TEST_CASE("leray fixes divergence-free fields") {
    Grid2D g = small_grid();
    SpectralField v1(g);
    SpectralField v2 = from_callable(g, [](double x, double) { return std::cos(x); });
    auto [w1, w2] = leray_project(v1, v2);
    CHECK(sobolev_norm(w1, 0.0) < 1e-13);
    CHECK(max_coeff_diff(w2, v2) < 1e-13);
}

TEST_CASE("leray annihilates gradients") {
    Grid2D g = small_grid();
    // grad(cos y) = (0, -sin y)
    SpectralField v1(g);
    SpectralField v2 = from_callable(g, [](double, double y) { return -std::sin(y); });
    auto [w1, w2] = leray_project(v1, v2);
    CHECK(sobolev_norm(w1, 0.0) < 1e-13);
    CHECK(sobolev_norm(w2, 0.0) < 1e-13);
}

TEST_CASE("leray helmholtz split by hand") {
    Grid2D g = small_grid();
    // v = (sin y, 0) + grad(cos y) -> divergence-free part (sin y, 0)
    SpectralField v1 = from_callable(g, [](double, double y) { return std::sin(y); });
    SpectralField v2 = from_callable(g, [](double, double y) { return -std::sin(y); });
    auto [w1, w2] = leray_project(v1, v2);
    CHECK(max_coeff_diff(w1, v1) < 1e-13);
    CHECK(sobolev_norm(w2, 0.0) < 1e-13);
}

TEST_CASE("leray idempotent and self-adjoint") {
    Grid2D g = small_grid();
    SpectralField a1 = random_field(g, 11), a2 = random_field(g, 12);
    SpectralField b1 = random_field(g, 13), b2 = random_field(g, 14);
    auto [pa1, pa2] = leray_project(a1, a2);
    auto [paa1, paa2] = leray_project(pa1, pa2);
    CHECK(max_coeff_diff(pa1, paa1) < 1e-12);
    CHECK(max_coeff_diff(pa2, paa2) < 1e-12);
    auto [pb1, pb2] = leray_project(b1, b2);
    const double lhs = l2_inner(pa1, b1) + l2_inner(pa2, b2);
    const double rhs = l2_inner(a1, pb1) + l2_inner(a2, pb2);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(lhs) + 1.0));
}

TEST_CASE("advect of constant field vanishes") {
    Grid2D g = small_grid();
    auto [u1, u2] = random_velocity(g, 21);
    SpectralField f(g);
    f.mode(0, 0) = 3.5;
    CHECK(sobolev_norm(advect(u1, u2, f), 0.0) == 0.0);
}

TEST_CASE("advect shear flow transports its own vorticity trivially") {
    Grid2D g = small_grid();
    SpectralField w = from_callable(g, [](double x, double) { return std::sin(x); });
    auto [u1, u2] = biot_savart(w);
    CHECK(sobolev_norm(advect(u1, u2, w), 0.0) < 1e-13);
}

TEST_CASE("advect uniform flow differentiates") {
    Grid2D g = small_grid();
    SpectralField u1(g), u2(g);
    u1.mode(0, 0) = 1.0;
    SpectralField f = from_callable(g, [](double x, double) { return std::sin(x); });
    SpectralField expect = from_callable(g, [](double x, double) { return std::cos(x); });
    CHECK(max_coeff_diff(advect(u1, u2, f), expect) < 1e-13);
}

TEST_CASE("advect grid mismatch is a configuration error") {
    Grid2D g = small_grid();
    Grid2D g2(128, 2.0 * kPi);
    auto [u1, u2] = random_velocity(g, 31);
    SpectralField f(g2);
    CHECK_THROWS_AS(advect(u1, u2, f), ConfigError);
}

TEST_CASE("advect mean vanishes and transport is skew symmetric") {
    Grid2D g = small_grid();
    for (std::uint64_t seed : {41, 42}) {
        auto [u1, u2] = random_velocity(g, seed);
        SpectralField f = random_field(g, seed + 100);
        SpectralField adv = advect(u1, u2, f);
        CHECK(std::abs(adv.mean()) < 1e-12 * sobolev_norm(f, 0.0));
        const double pairing = l2_inner(adv, f);
        const double u_norm = std::sqrt(sobolev_norm(u1, 0.0) * sobolev_norm(u1, 0.0) +
                                        sobolev_norm(u2, 0.0) * sobolev_norm(u2, 0.0));
        CHECK(std::abs(pairing) <= 1e-10 * u_norm * sobolev_norm(f, 1.0) * sobolev_norm(f, 0.0));
    }
}

TEST_CASE("fourier multiplier identity and sharp cutoff") {
    Grid2D g = small_grid();
    SpectralField f = random_field(g, 51);
    SpectralField same = fourier_multiplier(f, [](double, double) { return 1.0; });
    CHECK(max_coeff_diff(f, same) < 1e-15);

    SpectralField mode2(g);
    mode2.mode(2, 0) = cdouble(0.0, -0.5);
    mode2.mode(-2, 0) = cdouble(0.0, 0.5);
    SpectralField cut = fourier_multiplier(
        mode2, [](double kx, double ky) { return std::hypot(kx, ky) <= 1.0 ? 1.0 : 0.0; });
    CHECK(sobolev_norm(cut, 0.0) == 0.0);
}

TEST_CASE("fourier multiplier riesz potential on |k|=1 mode") {
    Grid2D g = small_grid();
    SpectralField f = from_callable(g, [](double x, double) { return std::sin(x); });
    SpectralField r = fourier_multiplier(f, [](double kx, double ky) {
        const double kk = std::hypot(kx, ky);
        return kk > 0.0 ? kk : 0.0;
    });
    CHECK(max_coeff_diff(r, f) < 1e-13);
}

TEST_CASE("fourier multiplier rejects odd symbols") {
    Grid2D g = small_grid();
    SpectralField f = random_field(g, 61);
    CHECK_THROWS_AS(fourier_multiplier(f, [](double kx, double) { return kx; }),
                    InvalidArgument);
}

TEST_CASE("sobolev norm values") {
    Grid2D g = small_grid();
    SpectralField zero(g);
    CHECK(sobolev_norm(zero, 0.0) == 0.0);
    SpectralField f = from_callable(g, [](double x, double) { return std::sin(x); });
    const double expect = kPi * std::sqrt(2.0);  // ||sin x||_L2 on [0,2pi)^2
    CHECK(sobolev_norm(f, 0.0) == doctest::Approx(expect).epsilon(1e-12));
    for (double s : {-0.5, 0.5, 1.0, 2.0})
        CHECK(sobolev_norm(f, s) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(sobolev_norm(f, -1.0), InvalidArgument);
}

TEST_CASE("lp norm values and Plancherel consistency") {
    Grid2D g = small_grid();
    SpectralField one(g);
    one.mode(0, 0) = 1.0;
    CHECK(lp_norm(one, kInf) == doctest::Approx(1.0).epsilon(1e-13));
    SpectralField f = from_callable(g, [](double x, double) { return std::sin(x); });
    CHECK(lp_norm(f, 2.0) == doctest::Approx(kPi * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(lp_norm(f, kInf) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(lp_norm(f, 0.5), InvalidArgument);

    for (std::uint64_t seed : {71, 72, 73}) {
        SpectralField r = random_field(g, seed);
        CHECK(lp_norm(r, 2.0) == doctest::Approx(sobolev_norm(r, 0.0)).epsilon(1e-10));
    }
}

TEST_CASE("integral_product3 matches closed form") {
    Grid2D g = small_grid();
    // int sin^2(x) cos^2(y) over the torus = pi^2
    SpectralField a = from_callable(g, [](double x, double) { return std::sin(x); });
    SpectralField b = from_callable(g, [](double, double y) { return std::cos(y); });
    SpectralField ab = multiply(a, b);
    CHECK(integral_product3(ab, a, b) == doctest::Approx(kPi * kPi).epsilon(1e-12));
}

TEST_CASE("lift preserves content") {
    Grid2D g = small_grid();
    SpectralField f = random_field(g, 81);
    SpectralField h = lift_to(f, 2 * g.n);
    CHECK(sobolev_norm(h, 0.0) == doctest::Approx(sobolev_norm(f, 0.0)).epsilon(1e-13));
    CHECK(h.grid().n == 2 * g.n);
}
