#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ylab/dyadic.hpp"
#include "ylab/ops.hpp"

namespace ylab {

/// Forcing in vorticity form: returns curl g(t) on the solver grid.
using CurlForcing = std::function<SpectralField(double)>;

struct FluidConfig {
    Grid2D grid;
    double viscosity = 0.0;
    double dt = 0.01;      // macro step; snapshots land on multiples of it
    double t_final = 1.0;  // must be an integer number of macro steps
    double cfl = 0.5;
    int snapshot_stride = 1;
    CurlForcing curl_forcing;  // empty = unforced
};

struct DiagRow {
    double t = 0.0;
    double enstrophy = 0.0;       // ||omega||_L2^2
    double energy = 0.0;          // 0.5 ||u||_L2^2
    double linf_vorticity = 0.0;
    double h1_velocity = 0.0;     // ||u||_{H^1 homogeneous}
};

struct Trajectory {
    std::vector<FlowState> states;
    std::vector<DiagRow> diagnostics;
    FluidConfig config;
};

/// One macro step of size config.dt: IFRK4 (RK4 on transport/forcing, exact
/// diffusion factor), with CFL-driven substep halving and post-step rejection.
/// Throws SolverError after 20 halvings.
FlowState step(const FlowState& state, const FluidConfig& config);

using SnapshotObserver = std::function<void(const FlowState&, const DiagRow&)>;

/// Integrate from t = 0 to t_final, storing a snapshot every snapshot_stride
/// macro steps (the initial state included).
Trajectory solve(const SpectralField& omega0, const FluidConfig& config);
/// Same integration, but snapshots are handed to the observer instead of stored.
void solve_streaming(const SpectralField& omega0, const FluidConfig& config,
                     const SnapshotObserver& observer);

/// Max over snapshots of the positive part of ||omega(t)||_p minus the
/// transport bound ||omega_0||_p + int_0^t ||curl g||_p, relative to the bound.
double transport_bound_check(const Trajectory& traj, double p);

/// Both sides of the high-frequency energy identity along a trajectory:
/// 0.5||sqrt(Id-S0) omega(t)||^2 against initial + forcing - viscous - J(t).
struct EnergyHfSeries {
    std::vector<double> t, lhs, rhs, residual;
};
EnergyHfSeries highfreq_energy_identity(std::span<const FlowState> traj,
                                        const DyadicFrame& frame, const CurlForcing& forcing,
                                        double viscosity);

enum class InitialData { SmoothRandom, Shear, TaylorGreen, SmoothedPatch };

struct InitialDataParams {
    std::uint64_t seed = 1;
    double amplitude = 1.0;
    double spectrum_power = 4.0;  // smooth_random decay |k|^{-power}
    double patch_center_x = -1.0;  // < 0 means the domain center
    double patch_center_y = -1.0;
    double patch_radius = 1.0;
    double patch_delta = 0.1;      // mollification width; must be >= 2 dx
    double patch_roughness = 0.0;  // relative boundary perturbation amplitude
};

/// Real, mean-free, dealiased vorticity field of the requested family.
SpectralField make_initial_data(const Grid2D& grid, InitialData kind,
                                const InitialDataParams& params);

}  // namespace ylab
