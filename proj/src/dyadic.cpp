#include "ylab/dyadic.hpp"

#include <algorithm>
#include <cmath>

namespace ylab {

namespace profiles {

namespace {
double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
}  // namespace

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = bump(t);
    return a / (a + bump(1.0 - t));
}

double psi(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 4.0 / 3.0) return 0.0;
    return 1.0 - smooth_step(3.0 * (r - 1.0));
}

double phi(double r) { return psi(0.5 * r) - psi(r); }

double psi_level(int j, double r) { return psi(std::ldexp(r, -j)); }

double phi_level(int j, double r) {
    return psi(std::ldexp(r, -(j + 1))) - psi(std::ldexp(r, -j));
}

}  // namespace profiles

DyadicFrame::DyadicFrame(double theta, const Grid2D& grid) : theta_(theta), grid_(grid) {
    if (!(theta > 0.0)) throw InvalidArgument("DyadicFrame: theta must be > 0");
    // Radial extent of the dealiased wavenumber set (corner modes included).
    const double k_top = std::sqrt(2.0) * grid.dealias_kmax();
    if (theta_ > k_top)
        throw FrameError("DyadicFrame: theta too large, no dyadic block fits the grid");
    int j = 0;
    while (theta_ * std::ldexp(1.0, j + 1) <= k_top) ++j;
    j_max_ = j;
    const double k_min = grid.wavenumber(1);
    j = 0;
    while (theta_ * std::ldexp(1.0, j - 1) * (8.0 / 3.0) >= k_min) --j;
    j_min_ = j;
}

void DyadicFrame::check_compatible(const SpectralField& f) const {
    if (f.grid().length != grid_.length)
        throw ConfigError("DyadicFrame: field domain length differs from frame grid");
}

SpectralField DyadicFrame::block(const SpectralField& f, int j) const {
    if (!contains(j)) throw InvalidArgument("DyadicFrame::block: index outside j_range");
    check_compatible(f);
    const double th = theta_;
    return apply_symbol(f, [th, j](double kx, double ky) {
        return profiles::phi_level(j, std::hypot(kx, ky) / th);
    });
}

SpectralField DyadicFrame::low_pass(const SpectralField& f, LowPass variant) const {
    check_compatible(f);
    const double th = theta_;
    switch (variant) {
        case LowPass::S0:
            return apply_symbol(
                f, [th](double kx, double ky) { return profiles::psi(std::hypot(kx, ky) / th); });
        case LowPass::SqrtS0:
            return apply_symbol(f, [th](double kx, double ky) {
                return std::sqrt(profiles::psi(std::hypot(kx, ky) / th));
            });
        case LowPass::SqrtIdMinusS0:
        default:
            return apply_symbol(f, [th](double kx, double ky) {
                return std::sqrt(1.0 - profiles::psi(std::hypot(kx, ky) / th));
            });
    }
}

SpectralField DyadicFrame::lowpass_level(const SpectralField& f, int k) const {
    check_compatible(f);
    const double th = theta_;
    return apply_symbol(f, [th, k](double kx, double ky) {
        return profiles::psi_level(k, std::hypot(kx, ky) / th);
    });
}

SpectralField DyadicFrame::highpass(const SpectralField& f) const {
    check_compatible(f);
    const double th = theta_;
    return apply_symbol(
        f, [th](double kx, double ky) { return 1.0 - profiles::psi(std::hypot(kx, ky) / th); });
}

double DyadicFrame::partition_residual() const {
    const int lim = grid_.dealias_limit();
    double worst = 0.0;
    for (int mx = 0; mx <= lim; ++mx) {
        for (int my = 0; my <= lim; ++my) {
            const double r =
                std::hypot(grid_.wavenumber(mx), grid_.wavenumber(my)) / theta_;
            double sum = profiles::psi(r);
            for (int j = 0; j <= j_max_; ++j) sum += profiles::phi_level(j, r);
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    }
    return worst;
}

BlockDecomposition decompose(const SpectralField& f, const DyadicFrame& frame) {
    BlockDecomposition d;
    d.low = frame.low_pass(f, DyadicFrame::LowPass::S0);
    for (int j = 0; j <= frame.j_max(); ++j) d.blocks.emplace_back(j, frame.block(f, j));
    return d;
}

double besov_norm(const SpectralField& f, double s, double p, const DyadicFrame& frame,
                  BesovKind kind) {
    if (p < 1.0) throw InvalidArgument("besov_norm: unsupported exponent p < 1");
    double best = 0.0;
    const int j_lo = (kind == BesovKind::Homogeneous) ? frame.j_min() : 0;
    for (int j = j_lo; j <= frame.j_max(); ++j) {
        const double w = std::pow(frame.theta() * std::ldexp(1.0, j), s);
        best = std::max(best, w * lp_norm(frame.block(f, j), p));
    }
    if (kind == BesovKind::Inhomogeneous)
        best = std::max(best, lp_norm(frame.low_pass(f, DyadicFrame::LowPass::S0), p));
    return best;
}

SpectralField sharp_lowpass(const SpectralField& f, double cutoff) {
    return apply_symbol(f, [cutoff](double kx, double ky) {
        return std::hypot(kx, ky) <= cutoff ? 1.0 : 0.0;
    });
}

SpectralField sharp_highpass(const SpectralField& f, double cutoff) {
    return apply_symbol(f, [cutoff](double kx, double ky) {
        return std::hypot(kx, ky) >= cutoff ? 1.0 : 0.0;
    });
}

ExtrapolationSplit extrapolation_split(const SpectralField& f, const SpectralField& g,
                                       double theta, double s0, double s1) {
    if (!(s0 < s1)) throw InvalidArgument("extrapolation_split: requires s0 < s1");
    SpectralField diff = f - g;
    ExtrapolationSplit out;
    out.low_actual = sobolev_norm(sharp_lowpass(diff, theta), s1);
    out.low_bound = std::pow(theta, s1 - s0) * sobolev_norm(diff, s0);
    out.high_norm = sobolev_norm(sharp_highpass(f, theta), s1);
    return out;
}

namespace {

// Direct quadrature of products of 2N-grid fields; exact when the total band
// stays below the padded Nyquist frequency.
double integ2(std::span<const double> a, std::span<const double> b, double cell) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc * cell;
}

double grad_max(const SpectralField& f) {
    return max_magnitude(ddx(f), ddy(f));
}

// Delta_j multiplier for any integer j; blocks outside the frame's j_range are
// identically zero on the grid, which is exactly what the J terms need.
SpectralField block_any(const SpectralField& f, const DyadicFrame& frame, int j) {
    const double th = frame.theta();
    return apply_symbol(f, [th, j](double kx, double ky) {
        return profiles::phi_level(j, std::hypot(kx, ky) / th);
    });
}

// u.grad(a) evaluated without truncation on the field's own grid.
SpectralField convect_nt(const SpectralField& u1, const SpectralField& u2,
                         const SpectralField& a) {
    return advect_raw(u1, u2, a);
}

}  // namespace

double iden1_residual(const SpectralField& u1, const SpectralField& u2,
                      const SpectralField& omega, int j, const DyadicFrame& frame) {
    if (!frame.contains(j) || !frame.contains(j + 1) || !frame.contains(j + 2))
        throw InvalidArgument("iden1_residual: j, j+1, j+2 must lie in the frame range");
    const Grid2D& g = omega.grid();
    const int m = 2 * g.n;
    const SpectralField pu1 = lift_to(u1, m), pu2 = lift_to(u2, m);
    const SpectralField pw = lift_to(omega, m);
    const double cell = (g.length / m) * (g.length / m);

    const SpectralField aj = frame.block(pw, j);
    const SpectralField aj1 = frame.block(pw, j + 1);
    SpectralField s = aj;  // (Delta_j + Delta_{j+1}) omega
    s += aj1;

    const std::vector<double> rs = to_real(s);
    const std::vector<double> raj1 = to_real(aj1);

    // LHS
    const double lhs = integ2(to_real(convect_nt(pu1, pu2, aj)), raj1, cell);

    // I2: high-pass of u against Delta_{j+1} Delta_{j+2} omega.
    const double cut = frame.theta() * std::ldexp(1.0, j) / 3.0;
    const SpectralField hu1 = apply_symbol(pu1, [cut](double kx, double ky) {
        return std::hypot(kx, ky) > cut ? 1.0 : 0.0;
    });
    const SpectralField hu2 = apply_symbol(pu2, [cut](double kx, double ky) {
        return std::hypot(kx, ky) > cut ? 1.0 : 0.0;
    });
    const SpectralField a12 = frame.block(frame.block(pw, j + 2), j + 1);
    const double i2 = integ2(to_real(convect_nt(hu1, hu2, aj)), to_real(a12), cell);

    // I1, first commutator: [Delta_{j+1}, u.grad] Delta_j omega against s.
    SpectralField c1 = frame.block(convect_nt(pu1, pu2, aj), j + 1);
    c1 -= convect_nt(pu1, pu2, frame.block(aj, j + 1));
    const double i1a = integ2(to_real(c1), rs, cell);

    // I1, second commutator: [Delta_j Delta_{j+1}, u.grad] s against s.
    SpectralField c2 = frame.block(frame.block(convect_nt(pu1, pu2, s), j + 1), j);
    c2 -= convect_nt(pu1, pu2, frame.block(frame.block(s, j + 1), j));
    const double i1b = integ2(to_real(c2), rs, cell);

    const double rhs = i1a - 0.5 * i1b + i2;
    return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-300);
}

JSeries j_decomposition(std::span<const FlowState> traj, const DyadicFrame& frame) {
    if (traj.size() < 2)
        throw InvalidArgument("j_decomposition: need at least 2 snapshots");
    const Grid2D& g = traj[0].omega.grid();
    const int m = 2 * g.n;
    const double cell = (g.length / m) * (g.length / m);
    const double th = frame.theta();

    JSeries out;
    const size_t nt = traj.size();
    std::vector<double> i1(nt), i2(nt), i3(nt), b2(nt), b3(nt);
    for (size_t q = 0; q < nt; ++q) {
        const SpectralField pu1 = lift_to(traj[q].u1, m), pu2 = lift_to(traj[q].u2, m);
        const SpectralField pw = lift_to(traj[q].omega, m);

        const SpectralField dm1 = block_any(pw, frame, -1);     // Delta_{-1} omega
        const SpectralField d0 = block_any(pw, frame, 0);       // Delta_0 omega
        const SpectralField sm1 = frame.lowpass_level(pw, -1);  // S_{-1} omega
        SpectralField high0 = pw;                               // (Id - S_0) omega
        high0 -= frame.lowpass_level(pw, 0);
        SpectralField high1 = pw;                               // (Id - S_1) omega
        high1 -= frame.lowpass_level(pw, 1);

        i1[q] = integ2(to_real(convect_nt(pu1, pu2, dm1)), to_real(d0), cell);
        i2[q] = integ2(to_real(convect_nt(pu1, pu2, sm1)), to_real(high0), cell);
        i3[q] = integ2(to_real(convect_nt(pu1, pu2, dm1)), to_real(high1), cell);

        const SpectralField hu1a = sharp_highpass(pu1, th / 12.0);
        const SpectralField hu2a = sharp_highpass(pu2, th / 12.0);
        const SpectralField hu1b = sharp_highpass(pu1, th / 6.0);
        const SpectralField hu2b = sharp_highpass(pu2, th / 6.0);
        const double hu_a = std::sqrt(sobolev_norm(hu1a, 0) * sobolev_norm(hu1a, 0) +
                                      sobolev_norm(hu2a, 0) * sobolev_norm(hu2a, 0));
        const double hu_b = std::sqrt(sobolev_norm(hu1b, 0) * sobolev_norm(hu1b, 0) +
                                      sobolev_norm(hu2b, 0) * sobolev_norm(hu2b, 0));
        b2[q] = hu_a * grad_max(sm1) * sobolev_norm(high0, 0);
        b3[q] = hu_b * grad_max(dm1) * sobolev_norm(high1, 0);
    }

    out.t.resize(nt);
    out.j1.assign(nt, 0.0);
    out.j2.assign(nt, 0.0);
    out.j3.assign(nt, 0.0);
    out.total.assign(nt, 0.0);
    out.bound_j2.assign(nt, 0.0);
    out.bound_j3.assign(nt, 0.0);
    out.t[0] = traj[0].t;
    for (size_t q = 1; q < nt; ++q) {
        const double h = traj[q].t - traj[q - 1].t;
        out.t[q] = traj[q].t;
        out.j1[q] = out.j1[q - 1] + 0.5 * h * (i1[q - 1] + i1[q]);
        out.j2[q] = out.j2[q - 1] + 0.5 * h * (i2[q - 1] + i2[q]);
        out.j3[q] = out.j3[q - 1] + 0.5 * h * (i3[q - 1] + i3[q]);
        out.bound_j2[q] = out.bound_j2[q - 1] + 0.5 * h * (b2[q - 1] + b2[q]);
        out.bound_j3[q] = out.bound_j3[q - 1] + 0.5 * h * (b3[q - 1] + b3[q]);
        out.total[q] = out.j1[q] + out.j2[q] + out.j3[q];
    }
    return out;
}

}  // namespace ylab
