#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relfrac/specfun.hpp"

#include <cmath>

using namespace relfrac::specfun;

TEST_CASE("gamma function values") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma_fn(0.5) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    // frozen oracle: high-precision quadrature of int_0^inf t^{2.7} e^{-t} dt
    CHECK(gamma_fn(3.7) == doctest::Approx(4.170651783796603).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
}

TEST_CASE("bessel_k half-integer closed forms") {
    CHECK(bessel_k(0.5, 1.0) ==
          doctest::Approx(std::sqrt(M_PI / 2.0) * std::exp(-1.0)).epsilon(1e-12));
    for (double r = 1e-3; r <= 50.0; r *= 1.7) {
        double k12 = std::sqrt(M_PI / (2.0 * r)) * std::exp(-r);
        CHECK(bessel_k(0.5, r) == doctest::Approx(k12).epsilon(1e-10));
        CHECK(bessel_k(1.5, r) == doctest::Approx(k12 * (1.0 + 1.0 / r)).epsilon(1e-10));
        CHECK(bessel_k(2.5, r) ==
              doctest::Approx(k12 * (1.0 + 3.0 / r + 3.0 / (r * r))).epsilon(1e-10));
    }
}

TEST_CASE("bessel_k general order against the library oracle") {
    for (double nu : {0.3, 1.0, 2.4}) {
        for (double r : {0.01, 0.1, 1.0, 10.0, 30.0, 50.0}) {
            double oracle = std::cyl_bessel_k(nu, r);
            CHECK(bessel_k(nu, r) == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("bessel_k limits and domain") {
    // r K_1(r) -> 1 as r -> 0
    CHECK(1e-4 * bessel_k(1.0, 1e-4) == doctest::Approx(1.0).epsilon(1e-3));
    // K_2(50) against the leading large-r form, within 5%
    double lead = std::sqrt(M_PI / 2.0) * std::pow(50.0, -0.5) * std::exp(-50.0);
    double ratio = bessel_k(2.0, 50.0) / lead;
    CHECK(ratio > 0.95);
    CHECK(ratio < 1.05);
    CHECK_THROWS_AS(bessel_k(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_k(1.0, -2.0), std::domain_error);
}

TEST_CASE("bessel_k overflow saturates with a flag") {
    BesselKResult res = bessel_k_checked(50.0, 1e-8);
    CHECK(res.saturated);
    CHECK(res.value > 0.0);
}

TEST_CASE("bessel_k decreasing in r") {
    for (double nu : {0.3, 1.5, 2.4}) {
        double prev = bessel_k(nu, 0.05);
        for (double r = 0.1; r < 40.0; r *= 1.5) {
            double v = bessel_k(nu, r);
            CHECK(v < prev);
            CHECK(v > 0.0);
            prev = v;
        }
    }
}

TEST_CASE("recurrence across the quadrature/asymptotic switch") {
    for (double nu : {0.8, 1.3}) {
        for (double r : {24.0, 24.9, 25.1, 26.0}) {
            double lhs = bessel_k(nu + 1.0, r);
            double rhs = bessel_k(nu - 1.0, r) + 2.0 * nu / r * bessel_k(nu, r);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }
    }
}

TEST_CASE("theta profile boundary values and monotonicity") {
    for (double s : {0.3, 0.5, 0.7}) {
        CHECK(theta_profile(s, 0.0) == doctest::Approx(1.0));
        double prev = theta_profile(s, 1e-3);
        CHECK(prev <= 1.0 + 1e-12);
        for (double r = 0.01; r < 30.0; r *= 1.6) {
            double v = theta_profile(s, r);
            CHECK(v > 0.0);
            CHECK(v <= prev + 1e-14);
            prev = v;
        }
        CHECK(theta_profile(s, 30.0) < 1e-9); // -> 0 at infinity
    }
    CHECK_THROWS_AS(theta_profile(1.5, 1.0), std::domain_error);
}

TEST_CASE("theta at s = 1/2 equals e^{-r}") {
    CHECK(theta_profile(0.5, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
}

TEST_CASE("theta satisfies its ODE") {
    for (double s : {0.3, 0.7}) {
        // away from r = 0, where higher derivatives blow up like r^{2s-4}
        for (double r : {1.0, 5.0, 10.0}) {
            double h = 5e-3;
            double tm = theta_profile(s, r - h), tc = theta_profile(s, r),
                   tp = theta_profile(s, r + h);
            double res = (tp - 2 * tc + tm) / (h * h) + (1 - 2 * s) / r * (tp - tm) / (2 * h) - tc;
            CHECK(std::abs(res) < 1e-5);
        }
    }
}

TEST_CASE("constants") {
    auto c = operator_constants(1, 0.5, 1.0);
    CHECK(c.sigma_s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.c_ns == doctest::Approx(1.0 / M_PI).epsilon(1e-12));
    CHECK(operator_constants(2, 0.5, 1.0).two_star_s == doctest::Approx(4.0).epsilon(1e-12));
    // the boundary N = 2s keeps finite constants but an unbounded critical exponent
    CHECK(std::isinf(operator_constants(1, 0.5, 1.0).two_star_s));
    CHECK_THROWS_AS(operator_constants(1, 0.6, 1.0), std::invalid_argument); // N < 2s
    CHECK_THROWS_AS(operator_constants(1, 0.3, -1.0), std::invalid_argument);
}
