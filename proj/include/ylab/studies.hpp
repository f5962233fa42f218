#pragma once

#include <cstdint>
#include <string>

#include "ylab/fluid.hpp"
#include "ylab/plasma.hpp"
#include "ylab/rates.hpp"

namespace ylab {

struct CurveSeries {
    std::string name;
    std::vector<double> t, value;
};

// ---------------------------------------------------------------------------
// Perturbation stability study: Euler reference against Euler runs from
// perturbed data u0 + eps du, recording H1/L2 error decay and the
// frequency-split diagnostics at the scheduled cutoff.
// ---------------------------------------------------------------------------

struct PerturbationStudyConfig {
    FluidConfig solver;  // viscosity must be 0
    std::vector<double> sweep;  // eps values, strictly decreasing, >= 4
    InitialData kind = InitialData::TaylorGreen;
    InitialDataParams data_params;
    std::uint64_t perturb_seed = 2;
    double perturb_amplitude = 1.0;
    double theta_alpha = 1.0;  // alpha used by the theta schedule
    double s_T = 1.0;          // regularity used by the theta schedule
};

struct PerturbationRun {
    double eps = 0.0;
    double theta = 0.0;
    double sup_l2 = 0.0, sup_h1dot = 0.0, sup_h1 = 0.0;
    double low_actual_max = 0.0, low_bound_max = 0.0, high_norm_max = 0.0;
    bool split_ok = true;  // low_actual <= low_bound at every snapshot
    CurveSeries h1_curve;
};

struct PerturbationReport {
    std::vector<PerturbationRun> runs;
    RateFit fit_l2, fit_h1;
    bool split_ok = true;
    bool monotone_h1 = true;
};

PerturbationReport run_perturbation_study(const PerturbationStudyConfig& cfg);

// ---------------------------------------------------------------------------
// Inviscid limit study: Navier-Stokes family against an Euler reference run
// at dt/ref_dt_factor, rate fits in L2 and H1dot, measured final-time Besov
// regularity, and the interpolation-exponent comparison.
// ---------------------------------------------------------------------------

struct InviscidStudyConfig {
    FluidConfig solver;         // family time step and grid
    std::vector<double> sweep;  // viscosities, strictly decreasing, >= 4
    InitialData kind = InitialData::TaylorGreen;
    InitialDataParams data_params;
    double besov_p = 4.0;
    int ref_dt_factor = 4;
    bool measure_s_T = true;  // runs an extra 2N reference for the stability scan
};

struct InviscidReport {
    std::vector<double> sweep;
    std::vector<double> err_l2, err_h1dot, err_h1;
    RateFit fit_l2, fit_h1dot, fit_h1dot_log;
    double s_T = 0.0;
    double predicted_h1_exponent = 0.0;  // alpha_hat s_T / (1 + s_T)
    double self_convergence_l2 = 0.0;    // Richardson check on the reference
    double self_convergence_h1dot = 0.0;
    bool reference_dominates = true;  // 10x margin between self error and signal
    CurveSeries besov_profile;        // smallest-eps run, t -> Besov norm at s_T
};

InviscidReport run_inviscid_study(const InviscidStudyConfig& cfg);

/// Largest s (scanned in steps of 0.05) at which the B^s_{2,inf} norms of the
/// two fields (same data solved at N and 2N) agree within 10%.
double measured_regularity(const SpectralField& w_n, const SpectralField& w_2n);

// ---------------------------------------------------------------------------
// Euler-Maxwell to MHD limit study over a speed-of-light sweep with E0 = 0.
// ---------------------------------------------------------------------------

struct EmLimitStudyConfig {
    PlasmaConfig solver;        // c overridden per sweep member
    std::vector<double> sweep;  // c values, strictly increasing, >= 4
    InitialData kind = InitialData::TaylorGreen;
    InitialDataParams data_params;
    InitialData b_kind = InitialData::Shear;
    InitialDataParams b_params;
    double eta = 1.0;
};

struct EmLimitRun {
    double c = 0.0;
    double err_u_h1 = 0.0;        // sup_t ||u^c - u||_{H^1}
    double err_b_l2 = 0.0;        // sup_t ||b^c - b||_{L^2}
    double err_b_h1dot_l2t = 0.0; // (int ||b^c - b||_{H1dot}^2 dt)^{1/2}
    double err_j_l2t = 0.0;       // (int ||j^c - curl B||_{L2}^2 dt)^{1/2}
    double ampere_l2t = 0.0;
    double pg_h1_l1t = 0.0;       // int ||P g^c||_{H^1} dt
    double energy_violation = 0.0;
};

struct EmLimitReport {
    std::vector<EmLimitRun> runs;
    RateFit fit_ampere;  // aggregate Ampere residual vs 1/c
    RateFit fit_u_h1;    // velocity error vs 1/c
    bool monotone = true;
};

EmLimitReport run_em_limit_study(const EmLimitStudyConfig& cfg);

}  // namespace ylab
