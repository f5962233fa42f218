#pragma once

#include <span>
#include <vector>

#include "ylab/ops.hpp"

namespace ylab {

/// Smooth radial profiles for the dyadic decomposition, built from the C-inf
/// bump g(t) = exp(-1/t) through the step s(t) = g(t)/(g(t)+g(1-t)).
///   psi:  1 on {r <= 1}, supported in {r <= 4/3}.
///   phi(r) = psi(r/2) - psi(r): supported in {1 <= r <= 8/3}, equal to 1 on
///            {4/3 <= r <= 2}.
/// Level evaluations scale r by exact powers of two (ldexp), so the telescoping
/// psi + sum_j phi_j is exact in floating point.
namespace profiles {
double smooth_step(double t);
double psi(double r);
double phi(double r);
/// psi(2^{-j} r)
double psi_level(int j, double r);
/// phi(2^{-j} r) = psi(2^{-j-1} r) - psi(2^{-j} r)
double phi_level(int j, double r);
}  // namespace profiles

/// Dyadic frequency frame at cutoff scale theta: S_0 = psi(D/theta),
/// Delta_j = phi(2^{-j} D/theta). Block j is representable when its support
/// annulus theta*2^j*[1, 8/3] meets the grid's dealiased wavenumber set.
class DyadicFrame {
  public:
    DyadicFrame(double theta, const Grid2D& grid);

    double theta() const { return theta_; }
    int j_min() const { return j_min_; }
    int j_max() const { return j_max_; }
    const Grid2D& grid() const { return grid_; }
    bool contains(int j) const { return j >= j_min_ && j <= j_max_; }

    /// Delta_j f. Throws InvalidArgument for j outside [j_min, j_max].
    SpectralField block(const SpectralField& f, int j) const;

    enum class LowPass { S0, SqrtS0, SqrtIdMinusS0 };
    SpectralField low_pass(const SpectralField& f, LowPass variant) const;
    /// S_k f = sum_{j <= k-1} Delta_j f = psi(2^{-k} D/theta) f, any integer k.
    SpectralField lowpass_level(const SpectralField& f, int k) const;
    /// (Id - S_0) f.
    SpectralField highpass(const SpectralField& f) const;

    /// Worst |psi + sum_{0<=j<=j_max} phi_j - 1| over dealiased grid wavenumbers.
    double partition_residual() const;

  private:
    void check_compatible(const SpectralField& f) const;
    double theta_ = 1.0;
    Grid2D grid_;
    int j_min_ = 0, j_max_ = 0;
};

/// S_0 f plus the blocks Delta_j f for j in [0, j_max]; sums back to f exactly
/// on dealiased fields.
struct BlockDecomposition {
    SpectralField low;
    std::vector<std::pair<int, SpectralField>> blocks;
};
BlockDecomposition decompose(const SpectralField& f, const DyadicFrame& frame);

enum class BesovKind { Inhomogeneous, Homogeneous };

/// B^s_{p,inf} norm: max(||S_0 f||_p, sup_{j>=0} (theta 2^j)^s ||Delta_j f||_p);
/// the homogeneous variant drops the low-pass term and uses all representable j.
double besov_norm(const SpectralField& f, double s, double p, const DyadicFrame& frame,
                  BesovKind kind = BesovKind::Inhomogeneous);

/// Sharp radial cutoffs (boundary modes included on both sides).
SpectralField sharp_lowpass(const SpectralField& f, double cutoff);
SpectralField sharp_highpass(const SpectralField& f, double cutoff);

struct ExtrapolationSplit {
    double low_bound = 0.0;   // theta^{s1-s0} * ||f-g||_{H^{s0}}
    double low_actual = 0.0;  // ||1_{|D|<=theta}(f-g)||_{H^{s1}}
    double high_norm = 0.0;   // ||1_{|D|>=theta} f||_{H^{s1}}
};
/// The two-sided frequency split behind the compactness-extrapolation
/// mechanism; low_actual <= low_bound holds exactly by Plancherel.
ExtrapolationSplit extrapolation_split(const SpectralField& f, const SpectralField& g,
                                       double theta, double s0, double s1);

/// Relative residual of the exact commutator identity
///   int u.grad(Delta_j w) Delta_{j+1} w = I_1 + I_2
/// evaluated alias-free on a 2N padded grid. Requires j, j+1, j+2 in range.
double iden1_residual(const SpectralField& u1, const SpectralField& u2,
                      const SpectralField& omega, int j, const DyadicFrame& frame);

/// Time series of the three trilinear terms of the high-frequency energy split,
/// cumulative in time (trapezoidal), plus the Hoelder bounds on J2 and J3.
struct JSeries {
    std::vector<double> t;
    std::vector<double> j1, j2, j3, total;
    std::vector<double> bound_j2, bound_j3;
};
JSeries j_decomposition(std::span<const FlowState> traj, const DyadicFrame& frame);

}  // namespace ylab
