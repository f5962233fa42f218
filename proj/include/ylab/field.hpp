#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ylab/grid.hpp"

namespace ylab {

using cdouble = std::complex<double>;

/// Scalar field on the periodic torus, stored as the full complex coefficient
/// array c_k of f(x) = sum_k c_k exp(i k.x). Real fields keep the Hermitian
/// symmetry c(-k) = conj(c(k)); all multipliers preserve it and zero the
/// Nyquist row.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const Grid2D& grid)
        : grid_(grid), coeffs_(static_cast<size_t>(grid.size()), cdouble(0.0, 0.0)) {}

    const Grid2D& grid() const { return grid_; }
    int n() const { return grid_.n; }

    std::span<cdouble> coeffs() { return coeffs_; }
    std::span<const cdouble> coeffs() const { return coeffs_; }

    cdouble& at(int ix, int iy) { return coeffs_[static_cast<size_t>(ix) * grid_.n + iy]; }
    const cdouble& at(int ix, int iy) const {
        return coeffs_[static_cast<size_t>(ix) * grid_.n + iy];
    }
    /// Access by integer frequency pair (mx, my), each in [-N/2, N/2).
    cdouble& mode(int mx, int my) { return at(grid_.index_of(mx), grid_.index_of(my)); }
    const cdouble& mode(int mx, int my) const {
        return at(grid_.index_of(mx), grid_.index_of(my));
    }

    cdouble mean() const { return coeffs_[0]; }
    void set_mean_zero() { coeffs_[0] = cdouble(0.0, 0.0); }

    void zero() { std::fill(coeffs_.begin(), coeffs_.end(), cdouble(0.0, 0.0)); }
    void zero_nyquist();
    /// 2/3-rule sharp truncation: coefficients with |m_x| or |m_y| > N/3 are zeroed.
    void dealias();
    bool is_dealiased(double tol = 0.0) const;

    /// max_k |c(-k) - conj(c(k))| / max_k |c(k)|; 0 for the zero field.
    double realness_violation() const;

    void operator+=(const SpectralField& o);
    void operator-=(const SpectralField& o);
    void operator*=(double s);
    void add_scaled(const SpectralField& o, double s);

  private:
    Grid2D grid_;
    std::vector<cdouble> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(SpectralField a, double s);

/// Inverse transform to real-space samples (row-major, x index slow).
std::vector<double> to_real(const SpectralField& f);
/// Forward transform of real samples; Nyquist rows zeroed.
SpectralField from_real(const Grid2D& grid, std::span<const double> samples);
/// Build a field by sampling fn(x, y) on the grid.
SpectralField from_function(const Grid2D& grid, double (*fn)(double, double));
template <typename F>
SpectralField from_callable(const Grid2D& grid, F&& fn) {
    std::vector<double> s(static_cast<size_t>(grid.size()));
    for (int i = 0; i < grid.n; ++i) {
        double x = i * grid.dx();
        for (int j = 0; j < grid.n; ++j) s[static_cast<size_t>(i) * grid.n + j] = fn(x, j * grid.dx());
    }
    return from_real(grid, s);
}

/// Inject the spectrum into a finer grid with the same domain length
/// (zero padding in frequency). target_n must be >= n and a power of two.
SpectralField lift_to(const SpectralField& f, int target_n);

}  // namespace ylab
