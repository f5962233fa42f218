#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ylab/errors.hpp"

namespace ylab {

/// Optimized moving cutoff for the extrapolation mechanism:
/// theta(eps) = eps^{-alpha/(1+s_T)} |log eps|^{-1/(2(1+s_T))}. Requires eps in (0,1).
double theta_schedule(double eps, double alpha, double s_T);

enum class RateModel { PurePower, PowerWithLog };

struct RateRow {
    double parameter = 0.0;  // eps (or 1/c)
    double error = 0.0;
};

struct RateFit {
    double exponent = 0.0;                 // alpha-hat: error ~ parameter^exponent
    std::optional<double> log_coefficient; // q in error ~ p^exponent |log p|^q
    double amplitude_log = 0.0;            // intercept in log space
    double residual_rms = 0.0;             // log-space RMS residual
    bool inconclusive = false;             // residual_rms > 0.2
    std::vector<RateRow> table;
};

/// Least squares in log space. PurePower needs >= 3 rows; PowerWithLog needs
/// >= 4 rows and constrains the power to the pure fit +/- 0.1.
RateFit fit_rate(const std::vector<RateRow>& table, RateModel model);

}  // namespace ylab
