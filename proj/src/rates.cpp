#include "ylab/rates.hpp"

#include <array>
#include <cmath>

namespace ylab {

double theta_schedule(double eps, double alpha, double s_T) {
    if (!(eps > 0.0 && eps < 1.0))
        throw InvalidArgument("theta_schedule: eps must lie in (0, 1)");
    if (!(alpha > 0.0) || !(s_T > 0.0))
        throw InvalidArgument("theta_schedule: alpha and s_T must be > 0");
    const double beta = 1.0 / (2.0 * (1.0 + s_T));
    return std::pow(eps, -alpha / (1.0 + s_T)) * std::pow(std::abs(std::log(eps)), -beta);
}

namespace {

// Solve the n x n normal equations by Gaussian elimination with partial
// pivoting; n <= 3 here.
template <int N>
std::array<double, N> solve_normal(std::array<std::array<double, N>, N> a,
                                   std::array<double, N> b) {
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        if (std::abs(a[col][col]) < 1e-14)
            throw InvalidArgument("fit_rate: degenerate fit (rank-deficient system)");
        for (int r = col + 1; r < N; ++r) {
            const double f = a[r][col] / a[col][col];
            for (int c2 = col; c2 < N; ++c2) a[r][c2] -= f * a[col][c2];
            b[r] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (int r = N - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c2 = r + 1; c2 < N; ++c2) acc -= a[r][c2] * x[c2];
        x[r] = acc / a[r][r];
    }
    return x;
}

double rms(const std::vector<double>& resid) {
    double acc = 0.0;
    for (double r : resid) acc += r * r;
    return std::sqrt(acc / resid.size());
}

}  // namespace

RateFit fit_rate(const std::vector<RateRow>& table, RateModel model) {
    const size_t min_rows = (model == RateModel::PurePower) ? 3 : 4;
    if (table.size() < min_rows)
        throw InvalidArgument("fit_rate: not enough rows for the requested model");
    for (const RateRow& r : table)
        if (!(r.parameter > 0.0) || !(r.error > 0.0))
            throw InvalidArgument("fit_rate: parameters and errors must be positive");

    const size_t n = table.size();
    std::vector<double> lx(n), ly(n), ll(n);
    for (size_t i = 0; i < n; ++i) {
        lx[i] = std::log(table[i].parameter);
        ly[i] = std::log(table[i].error);
        ll[i] = std::log(std::abs(lx[i]));
    }

    RateFit fit;
    fit.table = table;

    // Pure power: ly = a + p lx.
    {
        std::array<std::array<double, 2>, 2> m{};
        std::array<double, 2> rhs{};
        for (size_t i = 0; i < n; ++i) {
            m[0][0] += 1.0;
            m[0][1] += lx[i];
            m[1][0] += lx[i];
            m[1][1] += lx[i] * lx[i];
            rhs[0] += ly[i];
            rhs[1] += ly[i] * lx[i];
        }
        const auto sol = solve_normal<2>(m, rhs);
        fit.amplitude_log = sol[0];
        fit.exponent = sol[1];
        std::vector<double> resid(n);
        for (size_t i = 0; i < n; ++i) resid[i] = ly[i] - (sol[0] + sol[1] * lx[i]);
        fit.residual_rms = rms(resid);
    }

    if (model == RateModel::PowerWithLog) {
        const double p0 = fit.exponent;
        // ly = a + p lx + q log|lx|, with p constrained to p0 +/- 0.1.
        std::array<std::array<double, 3>, 3> m{};
        std::array<double, 3> rhs{};
        for (size_t i = 0; i < n; ++i) {
            const std::array<double, 3> row{1.0, lx[i], ll[i]};
            for (int r = 0; r < 3; ++r) {
                for (int c = 0; c < 3; ++c) m[r][c] += row[r] * row[c];
                rhs[r] += row[r] * ly[i];
            }
        }
        auto sol = solve_normal<3>(m, rhs);
        double p = sol[1];
        if (p > p0 + 0.1 || p < p0 - 0.1) {
            p = std::clamp(p, p0 - 0.1, p0 + 0.1);
            // refit (a, q) with the power clamped
            std::array<std::array<double, 2>, 2> m2{};
            std::array<double, 2> rhs2{};
            for (size_t i = 0; i < n; ++i) {
                const double y = ly[i] - p * lx[i];
                m2[0][0] += 1.0;
                m2[0][1] += ll[i];
                m2[1][0] += ll[i];
                m2[1][1] += ll[i] * ll[i];
                rhs2[0] += y;
                rhs2[1] += y * ll[i];
            }
            const auto s2 = solve_normal<2>(m2, rhs2);
            sol = {s2[0], p, s2[1]};
        }
        fit.amplitude_log = sol[0];
        fit.exponent = sol[1];
        fit.log_coefficient = sol[2];
        std::vector<double> resid(n);
        for (size_t i = 0; i < n; ++i)
            resid[i] = ly[i] - (sol[0] + sol[1] * lx[i] + sol[2] * ll[i]);
        fit.residual_rms = rms(resid);
    }

    fit.inconclusive = fit.residual_rms > 0.2;
    return fit;
}

}  // namespace ylab
