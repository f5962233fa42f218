#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ylab/fluid.hpp"
#include "ylab/ops.hpp"

namespace ylab {

struct PlasmaConfig {
    Grid2D grid;
    double sigma = 1.0;  // electric conductivity > 0
    double c = 100.0;    // speed of light > 0
    double dt = 0.005;
    double t_final = 0.5;
    double cfl = 0.5;
    int snapshot_stride = 1;
};

/// Normal-structure plasma state: horizontal u and E, vertical magnetic scalar b.
struct EMState {
    EMState() = default;
    explicit EMState(const Grid2D& g) : u1(g), u2(g), E1(g), E2(g), b(g) {}
    SpectralField u1, u2, E1, E2, b;
    double t = 0.0;
};

struct MHDState {
    MHDState() = default;
    explicit MHDState(const Grid2D& g) : u1(g), u2(g), b(g) {}
    SpectralField u1, u2, b;
    double t = 0.0;
};

/// Ohm's law j = sigma (c E + P(u x B)); with the normal structure
/// u x B = (u2 b, -u1 b). Divergence-free by construction.
std::pair<SpectralField, SpectralField> ohm_current(const EMState& s, const PlasmaConfig& cfg);

/// ||u||^2 + ||E||^2 + ||b||^2 in L^2.
double em_energy(const EMState& s);

/// Exact exp(A h) of the per-mode stiff Maxwell-Ohm block in (E1, E2, b)
/// coordinates (row-major 3x3): dE/dt = c curl B - sigma c^2 E, db/dt = -c curl E.
std::array<cdouble, 9> maxwell_propagator(double sigma, double c, double kx, double ky,
                                          double h);

/// One macro step of config.dt: exact linear propagation per wavenumber plus
/// ETDRK4 on the nonlinear terms; dt restricted by advection only.
EMState step_em(const EMState& s, const PlasmaConfig& cfg);

struct EmDiagRow {
    double t = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;  // cumulative (2/sigma) int ||j||^2
    double ampere_l2 = 0.0;    // ||curl B - j||_L2
    double pg_l2 = 0.0;
    double curl_g_linf = 0.0;
    double div_violation = 0.0;
};

using EmObserver = std::function<void(const EMState&, const EmDiagRow&)>;

struct EmTrajectory {
    std::vector<EMState> states;
    std::vector<EmDiagRow> diagnostics;
    PlasmaConfig config;
};

void solve_em_streaming(const EMState& init, const PlasmaConfig& cfg, const EmObserver& obs);
EmTrajectory solve_em(const EMState& init, const PlasmaConfig& cfg);

/// MHD step: u follows the Euler vorticity solver (the normal-structure
/// Lorentz force is a pure gradient), b follows advection-diffusion with
/// diffusivity 1/sigma. With b = 0 the u trajectory is bitwise the Euler one.
MHDState step_mhd(const MHDState& s, const PlasmaConfig& cfg);

using MhdObserver = std::function<void(const MHDState&)>;
void solve_mhd_streaming(const MHDState& init, const PlasmaConfig& cfg, const MhdObserver& obs);
/// Same solve addressed by vorticity; with b0 = 0 the emitted velocities are
/// bitwise identical to the Euler solver run from the same omega0.
void solve_mhd_streaming(const SpectralField& omega0, const SpectralField& b0,
                         const PlasmaConfig& cfg, const MhdObserver& obs);

/// Per-snapshot Ampere residual ||curl B - j|| in L^2 and H^{eta-1}, plus the
/// time-integrated L^2 aggregate (trapezoid in t). Requires eta in [1, 2].
struct AmpereResidualSeries {
    std::vector<double> t, l2, hs;
    double l2_time_integrated = 0.0;
};
AmpereResidualSeries ampere_residual(std::span<const EMState> traj, const PlasmaConfig& cfg,
                                     double eta);

/// Diagnostics of the limit forcing g = (j - curl B) x B.
struct LorentzForcingDiag {
    double pg_l2 = 0.0;        // ||P g||_L2
    double pg_h1dot = 0.0;     // ||P g||_{H^1 homogeneous}
    double curl_g_linf = 0.0;  // ||curl g||_inf = ||(curl B - j) . grad b||_inf
    double orthogonality = 0.0;  // ||curl g + j.grad b||_inf, zero when (curl B).grad b = 0
};
LorentzForcingDiag lorentz_forcing_diag(const EMState& s, const PlasmaConfig& cfg);

}  // namespace ylab
