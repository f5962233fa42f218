#pragma once

#include <stdexcept>
#include <string>

namespace ylab {

/// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad operation input: unsupported exponent, index out of range, bad ordering, bad data.
struct InvalidArgument : Error {
    using Error::Error;
};

/// Mismatched grids, out-of-range configuration values, unknown keys.
struct ConfigError : Error {
    using Error::Error;
};

/// Cutoff too large for the grid: no dyadic block fits.
struct FrameError : Error {
    using Error::Error;
};

/// Time integration failure; carries the time at which the step gave up.
struct SolverError : Error {
    SolverError(const std::string& msg, double t) : Error(msg), t_fail(t) {}
    double t_fail;
};

}  // namespace ylab
