#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "ylab/rates.hpp"

using namespace ylab;

TEST_CASE("theta schedule closed form") {
    // eps = e^{-10}, alpha = 0.5, s_T = 0.5: beta = 1/3,
    // theta = e^{10/3} 10^{-1/3}
    const double eps = std::exp(-10.0);
    const double expect = std::exp(10.0 / 3.0) * std::pow(10.0, -1.0 / 3.0);
    CHECK(theta_schedule(eps, 0.5, 0.5) == doctest::Approx(expect).epsilon(1e-13));
    CHECK(theta_schedule(eps, 0.5, 0.5) == doctest::Approx(13.0113).epsilon(1e-4));
    CHECK_THROWS_AS(theta_schedule(1.5, 0.5, 0.5), InvalidArgument);
    CHECK_THROWS_AS(theta_schedule(1.0, 0.5, 0.5), InvalidArgument);
}

TEST_CASE("theta schedule satisfies the cutoff growth conditions") {
    const double alpha = 0.7, sT = 0.4;
    double prev_theta = 0.0, prev_product = 1e300;
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double th = theta_schedule(eps, alpha, sT);
        CHECK(th > prev_theta);  // theta increases as eps decreases
        const double prod = th * std::pow(eps, alpha);
        CHECK(prod < prev_product);  // theta eps^alpha decreases to zero
        prev_theta = th;
        prev_product = prod;
    }
    // monotone in s_T: larger s_T flattens the growth
    CHECK(theta_schedule(1e-4, alpha, 10.0) < theta_schedule(1e-4, alpha, 0.5));
}

TEST_CASE("pure power fit recovers exact laws") {
    std::vector<RateRow> t1{{1e-2, 1e-1}, {1e-3, std::pow(10.0, -1.5)}, {1e-4, 1e-2}};
    RateFit f1 = fit_rate(t1, RateModel::PurePower);
    CHECK(f1.exponent == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f1.residual_rms <= 1e-12);
    CHECK_FALSE(f1.inconclusive);

    std::vector<RateRow> t2;
    for (double e : {1e-1, 1e-2, 1e-3, 1e-4}) t2.push_back({e, e});
    RateFit f2 = fit_rate(t2, RateModel::PurePower);
    CHECK(f2.exponent == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f2.residual_rms <= 1e-12);
}

TEST_CASE("power with log recovers the logarithmic correction") {
    std::vector<RateRow> t;
    for (double e : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        const double err = std::pow(e, 0.3) * std::pow(std::abs(std::log(e)), -0.25);
        t.push_back({e, err});
    }
    RateFit f = fit_rate(t, RateModel::PowerWithLog);
    REQUIRE(f.log_coefficient.has_value());
    CHECK(*f.log_coefficient == doctest::Approx(-0.25).epsilon(0.05));
    CHECK(f.exponent == doctest::Approx(0.3).epsilon(0.02));
    CHECK(f.residual_rms <= 1e-10);
}

TEST_CASE("fit_rate rejects bad input") {
    std::vector<RateRow> small{{1e-2, 1e-1}, {1e-3, 1e-2}};
    CHECK_THROWS_AS(fit_rate(small, RateModel::PurePower), InvalidArgument);
    std::vector<RateRow> three{{1e-2, 1e-1}, {1e-3, 1e-2}, {1e-4, 1e-3}};
    CHECK_THROWS_AS(fit_rate(three, RateModel::PowerWithLog), InvalidArgument);
    std::vector<RateRow> neg{{1e-2, -1.0}, {1e-3, 1e-2}, {1e-4, 1e-3}};
    CHECK_THROWS_AS(fit_rate(neg, RateModel::PurePower), InvalidArgument);
    // identical parameters make the normal equations rank deficient
    std::vector<RateRow> degen{{1e-2, 1e-1}, {1e-2, 1e-1}, {1e-2, 1e-1}};
    CHECK_THROWS_AS(fit_rate(degen, RateModel::PurePower), InvalidArgument);
}

TEST_CASE("noisy fits are flagged inconclusive") {
    std::vector<RateRow> t{{1e-1, 1.0}, {1e-2, 1e-3}, {1e-3, 1.0}, {1e-4, 1e-4}};
    RateFit f = fit_rate(t, RateModel::PurePower);
    CHECK(f.inconclusive);
    CHECK(f.residual_rms > 0.2);
}
