#pragma once

#include <cmath>
#include <numbers>

#include "ylab/errors.hpp"

namespace ylab {

/// Uniform N x N periodic grid on [0,L)^2. Wavenumbers are k = (2*pi/L)*m with
/// integer frequencies m in [-N/2, N/2); the m = -N/2 row is the Nyquist row and
/// is kept zeroed by every multiplier.
struct Grid2D {
    Grid2D() = default;
    Grid2D(int n_, double length_) : n(n_), length(length_) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw ConfigError("grid size must be a power of two >= 8");
        if (!(length > 0.0)) throw ConfigError("domain length must be > 0");
    }

    int n = 0;
    double length = 0.0;

    int size() const { return n * n; }
    double dx() const { return length / n; }

    /// Integer frequency of storage index i (FFT ordering).
    int freq(int i) const { return i < n / 2 ? i : i - n; }
    /// Storage index of integer frequency m in [-N/2, N/2).
    int index_of(int m) const { return m >= 0 ? m : m + n; }

    double wavenumber(int m) const { return 2.0 * std::numbers::pi / length * m; }
    /// Largest retained |m| under the 2/3 dealiasing rule.
    int dealias_limit() const { return n / 3; }
    /// Largest retained |k| component after dealiasing.
    double dealias_kmax() const { return wavenumber(dealias_limit()); }

    bool operator==(const Grid2D& o) const { return n == o.n && length == o.length; }
};

}  // namespace ylab
