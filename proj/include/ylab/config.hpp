#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ylab/errors.hpp"

namespace ylab {

/// Flat key-value experiment description. Unset keys take the documented
/// defaults; validation happens against the target study's preconditions.
struct ExperimentConfig {
    std::string study = "diagnostics";  // perturbation | inviscid | em_limit | diagnostics
    int n = 128;
    double length = 6.283185307179586;  // 2 pi
    std::uint64_t seed = 1;
    std::string outdir = "out";

    double dt = 0.01;
    double t_final = 1.0;
    double cfl = 0.5;
    int snapshot_stride = 1;

    std::string initial = "taylor_green";
    double amplitude = 1.0;
    double spectrum_power = 4.0;
    double patch_radius = 1.0;
    double patch_delta = 0.2;
    double patch_roughness = 0.0;

    std::vector<double> sweep;

    double besov_p = 4.0;
    int ref_dt_factor = 4;
    bool measure_s_t = true;

    std::uint64_t perturb_seed = 2;
    double perturb_amplitude = 1.0;
    double theta_alpha = 1.0;
    double s_t = 1.0;

    double sigma = 1.0;
    std::string b_initial = "shear";
    double b_amplitude = 1.0;
    std::uint64_t b_seed = 3;
    double eta = 1.0;

    double viscosity = 0.0;  // diagnostics study
    double theta = 4.0;      // diagnostics frame cutoff

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parse and fully validate; throws ConfigError whose message carries every
/// violation found (one per line), not just the first.
ExperimentConfig parse_config(const std::string& text);

/// All validation errors for the given text; empty when valid.
std::vector<std::string> config_errors(const std::string& text);

/// Canonical rendering; parse_config(render_config(c)) == c for valid c.
std::string render_config(const ExperimentConfig& cfg);

std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace ylab
