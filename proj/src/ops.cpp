#include "ylab/ops.hpp"

#include <cmath>

namespace ylab {

SpectralField fourier_multiplier(const SpectralField& f,
                                 const std::function<double(double, double)>& symbol) {
    const Grid2D& g = f.grid();
    const int lim = g.n / 2 - 1;
    for (int mx = 0; mx <= lim; ++mx) {
        for (int my = -lim; my <= lim; ++my) {
            const double kx = g.wavenumber(mx), ky = g.wavenumber(my);
            const double fwd = symbol(kx, ky), rev = symbol(-kx, -ky);
            if (std::abs(fwd - rev) > 1e-12 * (1.0 + std::abs(fwd)))
                throw InvalidArgument("fourier_multiplier: symbol is not even; realness violated");
        }
    }
    return apply_symbol(f, [&](double kx, double ky) { return symbol(kx, ky); });
}

SpectralField ddx(const SpectralField& f) {
    return apply_symbol(f, [](double kx, double) { return cdouble(0.0, kx); });
}

SpectralField ddy(const SpectralField& f) {
    return apply_symbol(f, [](double, double ky) { return cdouble(0.0, ky); });
}

SpectralField laplacian(const SpectralField& f) {
    return apply_symbol(f, [](double kx, double ky) { return -(kx * kx + ky * ky); });
}

std::pair<SpectralField, SpectralField> biot_savart(const SpectralField& omega) {
    const Grid2D& g = omega.grid();
    SpectralField u1(g), u2(g);
    for (int i = 0; i < g.n; ++i) {
        const double kx = g.wavenumber(g.freq(i));
        for (int j = 0; j < g.n; ++j) {
            const double ky = g.wavenumber(g.freq(j));
            const double k2 = kx * kx + ky * ky;
            if (k2 == 0.0) continue;  // mean vorticity has no periodic inverse
            const cdouble psi = -omega.at(i, j) / k2;
            u1.at(i, j) = cdouble(0.0, -ky) * psi;
            u2.at(i, j) = cdouble(0.0, kx) * psi;
        }
    }
    u1.zero_nyquist();
    u2.zero_nyquist();
    return {std::move(u1), std::move(u2)};
}

SpectralField curl(const SpectralField& v1, const SpectralField& v2) {
    SpectralField w = ddx(v2);
    w -= ddy(v1);
    return w;
}

std::pair<SpectralField, SpectralField> leray_project(const SpectralField& v1,
                                                      const SpectralField& v2) {
    const Grid2D& g = v1.grid();
    if (!(g == v2.grid())) throw ConfigError("leray_project: component grids differ");
    SpectralField w1(g), w2(g);
    for (int i = 0; i < g.n; ++i) {
        const double kx = g.wavenumber(g.freq(i));
        for (int j = 0; j < g.n; ++j) {
            const double ky = g.wavenumber(g.freq(j));
            const double k2 = kx * kx + ky * ky;
            const cdouble a = v1.at(i, j), b = v2.at(i, j);
            if (k2 == 0.0) {
                w1.at(i, j) = a;
                w2.at(i, j) = b;
                continue;
            }
            const cdouble kdot = (kx * a + ky * b) / k2;
            w1.at(i, j) = a - kx * kdot;
            w2.at(i, j) = b - ky * kdot;
        }
    }
    w1.zero_nyquist();
    w2.zero_nyquist();
    return {std::move(w1), std::move(w2)};
}

namespace {

SpectralField convect(const SpectralField& u1, const SpectralField& u2, const SpectralField& f,
                      bool truncate) {
    const Grid2D& g = f.grid();
    if (!(g == u1.grid()) || !(g == u2.grid()))
        throw ConfigError("advect: grids of u and f differ");
    const std::vector<double> a = to_real(u1);
    const std::vector<double> b = to_real(u2);
    const std::vector<double> fx = to_real(ddx(f));
    const std::vector<double> fy = to_real(ddy(f));
    std::vector<double> prod(a.size());
    for (size_t i = 0; i < prod.size(); ++i) prod[i] = a[i] * fx[i] + b[i] * fy[i];
    SpectralField out = from_real(g, prod);
    if (truncate) out.dealias();
    return out;
}

SpectralField product(const SpectralField& a, const SpectralField& b, bool truncate) {
    if (!(a.grid() == b.grid())) throw ConfigError("multiply: grids differ");
    const std::vector<double> ra = to_real(a);
    const std::vector<double> rb = to_real(b);
    std::vector<double> prod(ra.size());
    for (size_t i = 0; i < prod.size(); ++i) prod[i] = ra[i] * rb[i];
    SpectralField out = from_real(a.grid(), prod);
    if (truncate) out.dealias();
    return out;
}

}  // namespace

SpectralField advect(const SpectralField& u1, const SpectralField& u2, const SpectralField& f) {
    return convect(u1, u2, f, true);
}

SpectralField advect_raw(const SpectralField& u1, const SpectralField& u2,
                         const SpectralField& f) {
    return convect(u1, u2, f, false);
}

SpectralField multiply(const SpectralField& a, const SpectralField& b) {
    return product(a, b, true);
}

SpectralField multiply_raw(const SpectralField& a, const SpectralField& b) {
    return product(a, b, false);
}

double sobolev_norm(const SpectralField& f, double s) {
    if (s <= -1.0) throw InvalidArgument("sobolev_norm: unsupported exponent s <= -1");
    const Grid2D& g = f.grid();
    if (s < 0.0 && std::abs(f.mean()) > 1e-12)
        throw InvalidArgument("sobolev_norm: s < 0 requires a mean-free field");
    double acc = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double kx = g.wavenumber(g.freq(i));
        for (int j = 0; j < g.n; ++j) {
            const double ky = g.wavenumber(g.freq(j));
            const double k2 = kx * kx + ky * ky;
            const double c2 = std::norm(f.at(i, j));
            if (k2 == 0.0) {
                if (s == 0.0) acc += c2;
                continue;
            }
            acc += (s == 0.0 ? 1.0 : std::pow(k2, s)) * c2;
        }
    }
    return g.length * std::sqrt(acc);
}

double lp_norm(const SpectralField& f, double p) {
    if (p < 1.0) throw InvalidArgument("lp_norm: unsupported exponent p < 1");
    const std::vector<double> r = to_real(f);
    if (p == kInf) {
        double m = 0.0;
        for (double v : r) m = std::max(m, std::abs(v));
        return m;
    }
    const double cell = f.grid().dx() * f.grid().dx();
    double acc = 0.0;
    if (p == 2.0) {
        for (double v : r) acc += v * v;
    } else if (p == 1.0) {
        for (double v : r) acc += std::abs(v);
    } else {
        for (double v : r) acc += std::pow(std::abs(v), p);
    }
    return std::pow(cell * acc, 1.0 / p);
}

double l2_inner(const SpectralField& f, const SpectralField& g) {
    if (!(f.grid() == g.grid())) throw ConfigError("l2_inner: grids differ");
    const double L2 = f.grid().length * f.grid().length;
    double acc = 0.0;
    auto cf = f.coeffs();
    auto cg = g.coeffs();
    for (size_t i = 0; i < cf.size(); ++i)
        acc += cf[i].real() * cg[i].real() + cf[i].imag() * cg[i].imag();
    return L2 * acc;
}

double integral_product3(const SpectralField& a, const SpectralField& b,
                         const SpectralField& c) {
    const Grid2D& g = a.grid();
    if (!(g == b.grid()) || !(g == c.grid()))
        throw ConfigError("integral_product3: grids differ");
    const int m = 2 * g.n;
    const std::vector<double> ra = to_real(lift_to(a, m));
    const std::vector<double> rb = to_real(lift_to(b, m));
    const std::vector<double> rc = to_real(lift_to(c, m));
    const double cell = (g.length / m) * (g.length / m);
    double acc = 0.0;
    for (size_t i = 0; i < ra.size(); ++i) acc += ra[i] * rb[i] * rc[i];
    return cell * acc;
}

double max_magnitude(const SpectralField& a, const SpectralField& b) {
    const std::vector<double> ra = to_real(a);
    const std::vector<double> rb = to_real(b);
    double m = 0.0;
    for (size_t i = 0; i < ra.size(); ++i)
        m = std::max(m, std::hypot(ra[i], rb[i]));
    return m;
}

FlowState::FlowState(SpectralField omega_, double t_) : omega(std::move(omega_)), t(t_) {
    auto [a, b] = biot_savart(omega);
    u1 = std::move(a);
    u2 = std::move(b);
}

double flow_state_violation(const FlowState& s) {
    const Grid2D& g = s.omega.grid();
    double div_worst = 0.0, curl_worst = 0.0, amp = 0.0;
    for (int i = 0; i < g.n; ++i) {
        const double kx = g.wavenumber(g.freq(i));
        for (int j = 0; j < g.n; ++j) {
            const double ky = g.wavenumber(g.freq(j));
            const cdouble a = s.u1.at(i, j), b = s.u2.at(i, j);
            const double ua = std::abs(a) + std::abs(b);
            if (ua > 0.0) div_worst = std::max(div_worst, std::abs(kx * a + ky * b) / ua);
            const cdouble w = cdouble(0.0, 1.0) * (kx * b - ky * a);
            cdouble target = s.omega.at(i, j);
            if (kx == 0.0 && ky == 0.0) target = cdouble(0.0, 0.0);
            curl_worst = std::max(curl_worst, std::abs(w - target));
            amp = std::max(amp, std::abs(target));
        }
    }
    if (amp > 0.0) curl_worst /= amp;
    return std::max(div_worst, curl_worst);
}

}  // namespace ylab
