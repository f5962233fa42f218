#pragma once

#include <cmath>
#include <random>

#include "ylab/dyadic.hpp"
#include "ylab/ops.hpp"

namespace ylab::test {

/// Random real dealiased mean-free field with |k|^{-decay} spectrum.
inline SpectralField random_field(const Grid2D& grid, std::uint64_t seed, double decay = 2.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    SpectralField f(grid);
    const int lim = grid.dealias_limit();
    for (int mx = 0; mx <= lim; ++mx) {
        for (int my = (mx == 0 ? 1 : -lim); my <= lim; ++my) {
            const double kk = std::hypot(grid.wavenumber(mx), grid.wavenumber(my));
            const cdouble c = std::polar(std::pow(kk, -decay), phase(rng));
            f.mode(mx, my) = c;
            f.mode(-mx, -my) = std::conj(c);
        }
    }
    return f;
}

/// Random divergence-free velocity pair (via a random vorticity).
inline std::pair<SpectralField, SpectralField> random_velocity(const Grid2D& grid,
                                                               std::uint64_t seed) {
    return biot_savart(random_field(grid, seed, 2.0));
}

inline double max_coeff_diff(const SpectralField& a, const SpectralField& b) {
    double worst = 0.0;
    auto ca = a.coeffs();
    auto cb = b.coeffs();
    for (size_t i = 0; i < ca.size(); ++i) worst = std::max(worst, std::abs(ca[i] - cb[i]));
    return worst;
}

inline double rel_l2_diff(const SpectralField& a, const SpectralField& b) {
    SpectralField d = a - b;
    const double na = sobolev_norm(a, 0.0);
    return na > 0.0 ? sobolev_norm(d, 0.0) / na : sobolev_norm(d, 0.0);
}

}  // namespace ylab::test
