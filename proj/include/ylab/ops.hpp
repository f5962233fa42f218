#pragma once

#include <functional>
#include <limits>
#include <utility>

#include "ylab/field.hpp"

namespace ylab {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Pointwise complex multiplier m(kx, ky) applied in spectral space.
/// Internal workhorse; callers are responsible for realness symmetry
/// m(-k) = conj(m(k)). Nyquist rows are zeroed afterwards.
template <typename F>
SpectralField apply_symbol(const SpectralField& f, F&& m) {
    const Grid2D& g = f.grid();
    SpectralField out(g);
    for (int i = 0; i < g.n; ++i) {
        const double kx = g.wavenumber(g.freq(i));
        for (int j = 0; j < g.n; ++j) {
            const double ky = g.wavenumber(g.freq(j));
            out.at(i, j) = f.at(i, j) * m(kx, ky);
        }
    }
    out.zero_nyquist();
    return out;
}

/// Real-valued Fourier multiplier m(D). The symbol must be even
/// (m(k) = m(-k)); otherwise the result could not be a real field and an
/// InvalidArgument ("realness") is thrown.
SpectralField fourier_multiplier(const SpectralField& f,
                                 const std::function<double(double, double)>& symbol);

SpectralField ddx(const SpectralField& f);
SpectralField ddy(const SpectralField& f);
SpectralField laplacian(const SpectralField& f);

/// u = curl^{-1} omega via the stream function: psi_hat = -omega_hat/|k|^2,
/// u = (-d_y psi, d_x psi). The k=0 mode of omega is dropped. Output is
/// divergence-free with curl u = omega - mean(omega).
std::pair<SpectralField, SpectralField> biot_savart(const SpectralField& omega);

/// curl of a horizontal vector field: d_x v2 - d_y v1.
SpectralField curl(const SpectralField& v1, const SpectralField& v2);

/// Leray projection onto divergence-free fields; the k=0 mode passes through.
std::pair<SpectralField, SpectralField> leray_project(const SpectralField& v1,
                                                      const SpectralField& v2);

/// Dealiased pseudospectral transport term u.grad(f). Grids must match.
SpectralField advect(const SpectralField& u1, const SpectralField& u2, const SpectralField& f);
/// Same product without the final 2/3 truncation (for exact padded-grid work).
SpectralField advect_raw(const SpectralField& u1, const SpectralField& u2,
                         const SpectralField& f);

/// Dealiased pointwise product of two fields.
SpectralField multiply(const SpectralField& a, const SpectralField& b);
SpectralField multiply_raw(const SpectralField& a, const SpectralField& b);

/// Homogeneous Sobolev norm (L^2 for s = 0): (L^2 sum |k|^{2s} |c_k|^2)^{1/2}.
/// Requires s > -1; for s < 0 the field must be mean-free.
double sobolev_norm(const SpectralField& f, double s);

/// Physical-space L^p norm by equal-weight quadrature; p = kInf gives the grid max.
double lp_norm(const SpectralField& f, double p);

/// Exact L^2 pairing L^2(torus): integral of f*g via Plancherel.
double l2_inner(const SpectralField& f, const SpectralField& g);

/// Exact integral of the pointwise product of up to three fields, evaluated on
/// a 2N padded grid so 2/3-dealiased inputs produce no aliasing at all.
double integral_product3(const SpectralField& a, const SpectralField& b,
                         const SpectralField& c);

/// max over grid points of sqrt(a^2 + b^2) for the vector (a, b).
double max_magnitude(const SpectralField& a, const SpectralField& b);

/// Velocity-vorticity pair with cached divergence-free velocity.
struct FlowState {
    FlowState() = default;
    FlowState(SpectralField omega_, double t_);

    SpectralField omega;
    SpectralField u1, u2;
    double t = 0.0;
};

/// Largest of the two FlowState invariant residuals (div u, curl consistency).
double flow_state_violation(const FlowState& s);

}  // namespace ylab
