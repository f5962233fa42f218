#include "ylab/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace ylab {

namespace {

// Plan cache keyed by grid size. Plans are created with FFTW_ESTIMATE (the
// planner measures nothing, so repeated runs pick identical algorithms) and
// FFTW_UNALIGNED (valid for any caller buffer). fftw_execute_dft on distinct
// buffers is thread-safe; only planning needs the lock.
struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

Plans& plans_for(int n) {
    static std::mutex mu;
    static std::map<int, Plans> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<cdouble> a(static_cast<size_t>(n) * n), b(static_cast<size_t>(n) * n);
    Plans p;
    p.fwd = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, p).first->second;
}

}  // namespace

void SpectralField::zero_nyquist() {
    const int n = grid_.n;
    const int ny = n / 2;  // storage index of m = -N/2
    for (int j = 0; j < n; ++j) at(ny, j) = cdouble(0.0, 0.0);
    for (int i = 0; i < n; ++i) at(i, ny) = cdouble(0.0, 0.0);
}

void SpectralField::dealias() {
    const int n = grid_.n;
    const int lim = grid_.dealias_limit();
    for (int i = 0; i < n; ++i) {
        const int mx = grid_.freq(i);
        const bool kill_row = std::abs(mx) > lim;
        for (int j = 0; j < n; ++j) {
            if (kill_row || std::abs(grid_.freq(j)) > lim)
                at(i, j) = cdouble(0.0, 0.0);
        }
    }
}

bool SpectralField::is_dealiased(double tol) const {
    const int n = grid_.n;
    const int lim = grid_.dealias_limit();
    for (int i = 0; i < n; ++i) {
        const int mx = grid_.freq(i);
        for (int j = 0; j < n; ++j) {
            if (std::abs(mx) > lim || std::abs(grid_.freq(j)) > lim) {
                if (std::abs(at(i, j)) > tol) return false;
            }
        }
    }
    return true;
}

double SpectralField::realness_violation() const {
    const int n = grid_.n;
    double worst = 0.0, amp = 0.0;
    for (int i = 0; i < n; ++i) {
        const int mx = grid_.freq(i);
        if (mx == -n / 2) continue;
        for (int j = 0; j < n; ++j) {
            const int my = grid_.freq(j);
            if (my == -n / 2) continue;
            const cdouble c = at(i, j);
            amp = std::max(amp, std::abs(c));
            const cdouble d = c - std::conj(mode(-mx, -my));
            worst = std::max(worst, std::abs(d));
        }
    }
    return amp > 0.0 ? worst / amp : 0.0;
}

void SpectralField::operator+=(const SpectralField& o) {
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
}
void SpectralField::operator-=(const SpectralField& o) {
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
}
void SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
}
void SpectralField::add_scaled(const SpectralField& o, double s) {
    for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * o.coeffs_[i];
}

SpectralField operator+(SpectralField a, const SpectralField& b) { a += b; return a; }
SpectralField operator-(SpectralField a, const SpectralField& b) { a -= b; return a; }
SpectralField operator*(SpectralField a, double s) { a *= s; return a; }

std::vector<double> to_real(const SpectralField& f) {
    const int n = f.n();
    Plans& p = plans_for(n);
    std::vector<cdouble> in(f.coeffs().begin(), f.coeffs().end());
    std::vector<cdouble> out(in.size());
    fftw_execute_dft(p.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    std::vector<double> r(in.size());
    for (size_t i = 0; i < out.size(); ++i) r[i] = out[i].real();
    return r;
}

SpectralField from_real(const Grid2D& grid, std::span<const double> samples) {
    if (static_cast<int>(samples.size()) != grid.size())
        throw ConfigError("sample count does not match grid");
    const int n = grid.n;
    Plans& p = plans_for(n);
    std::vector<cdouble> in(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) in[i] = cdouble(samples[i], 0.0);
    SpectralField f(grid);
    fftw_execute_dft(p.fwd, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(f.coeffs().data()));
    const double scale = 1.0 / grid.size();
    for (auto& c : f.coeffs()) c *= scale;
    f.zero_nyquist();
    return f;
}

SpectralField from_function(const Grid2D& grid, double (*fn)(double, double)) {
    return from_callable(grid, fn);
}

SpectralField lift_to(const SpectralField& f, int target_n) {
    const Grid2D& g = f.grid();
    if (target_n < g.n) throw ConfigError("lift_to target must not shrink the grid");
    Grid2D fine(target_n, g.length);
    SpectralField out(fine);
    for (int i = 0; i < g.n; ++i) {
        const int mx = g.freq(i);
        if (mx == -g.n / 2) continue;
        for (int j = 0; j < g.n; ++j) {
            const int my = g.freq(j);
            if (my == -g.n / 2) continue;
            out.mode(mx, my) = f.at(i, j);
        }
    }
    return out;
}

}  // namespace ylab
