#include "relfrac/specfun.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace relfrac::specfun {

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn: argument must be positive");
    return std::tgamma(x);
}

namespace {

bool is_half_integer(double nu) {
    double twice = 2.0 * nu;
    return std::abs(twice - std::round(twice)) < 1e-12 &&
           std::abs(nu - std::round(nu)) > 0.25;
}

// K_{1/2+k} via upward recurrence from the closed forms for K_{1/2}, K_{3/2}.
BesselKResult bessel_k_half_integer(double nu, double r) {
    double base = std::sqrt(M_PI / (2.0 * r)) * std::exp(-r);
    int k = static_cast<int>(std::round(nu - 0.5));
    if (k == 0) return {base, false};
    double km = base;                // K_{1/2}
    double kc = base * (1.0 + 1.0 / r); // K_{3/2}
    double order = 1.5;
    for (int j = 1; j < k; ++j) {
        double kn = km + (2.0 * order / r) * kc;
        if (!std::isfinite(kn)) return {std::numeric_limits<double>::max(), true};
        km = kc;
        kc = kn;
        order += 1.0;
    }
    return {kc, false};
}

// Trapezoid on the even integrand exp(-r cosh t) cosh(nu t); all odd
// derivatives vanish at t = 0, so the rule converges exponentially.
BesselKResult bessel_k_quadrature(double nu, double r) {
    const double step = 0.01;
    double sum = 0.5 * std::exp(-r); // half-weight endpoint at t = 0
    double t = step;
    for (int j = 1; j < 20000; ++j, t += step) {
        double term = std::exp(-r * std::cosh(t)) * std::cosh(nu * t);
        if (!std::isfinite(term)) return {std::numeric_limits<double>::max(), true};
        sum += term;
        if (term < sum * 1e-18 && t > 1.0) break;
    }
    double value = sum * step;
    if (!std::isfinite(value)) return {std::numeric_limits<double>::max(), true};
    return {value, false};
}

// Divergent large-r series sqrt(pi/2r) e^{-r} sum a_k(nu) r^{-k}, truncated
// at its smallest term.
BesselKResult bessel_k_asymptotic(double nu, double r) {
    double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::max();
    for (int k = 1; k < 60; ++k) {
        double num = mu - (2.0 * k - 1.0) * (2.0 * k - 1.0);
        term *= num / (8.0 * k * r);
        if (std::abs(term) >= prev) break; // smallest term reached
        sum += term;
        prev = std::abs(term);
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    double value = std::sqrt(M_PI / (2.0 * r)) * std::exp(-r) * sum;
    return {value, false};
}

} // namespace

BesselKResult bessel_k_checked(double nu, double r) {
    if (!(r > 0.0)) throw std::domain_error("bessel_k: radius must be positive");
    nu = std::abs(nu); // K_{-nu} = K_nu
    // Overflow screen via the small-r asymptotic magnitude.
    if (nu > 0.0 && r < 1.0) {
        double log_est = std::lgamma(nu) - std::log(2.0) - nu * std::log(r / 2.0);
        if (log_est > 690.0) return {std::numeric_limits<double>::max(), true};
    }
    if (is_half_integer(nu)) return bessel_k_half_integer(nu, r);
    if (r > kBesselSwitchRadius) return bessel_k_asymptotic(nu, r);
    return bessel_k_quadrature(nu, r);
}

double bessel_k(double nu, double r) {
    return bessel_k_checked(nu, r).value;
}

double theta_profile(double s, double r) {
    if (!(s > 0.0 && s < 1.0)) throw std::domain_error("theta_profile: order must lie in (0,1)");
    if (r < 0.0) throw std::domain_error("theta_profile: radius must be nonnegative");
    if (r == 0.0) return 1.0; // small-r limit of (2/Gamma(s))(r/2)^s K_s(r)
    double k = bessel_k(s, r);
    double value = (2.0 / gamma_fn(s)) * std::pow(r / 2.0, s) * k;
    return value;
}

OperatorConstants operator_constants(int N, double s, double m) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("operator_constants: s must lie in (0,1)");
    if (!(m > 0.0)) throw std::invalid_argument("operator_constants: m must be positive");
    if (static_cast<double>(N) < 2.0 * s)
        throw std::invalid_argument("operator_constants: N < 2s");
    OperatorConstants c;
    c.N = N;
    c.s = s;
    c.m = m;
    c.sigma_s = std::pow(2.0, 1.0 - 2.0 * s) * gamma_fn(1.0 - s) / gamma_fn(s);
    c.c_ns = std::pow(2.0, -(N + 2.0 * s) / 2.0 + 1.0) * std::pow(M_PI, -N / 2.0) *
             std::pow(2.0, 2.0 * s) * s * (1.0 - s) / gamma_fn(2.0 - s);
    // at the boundary N = 2s the critical exponent is unbounded
    c.two_star_s = (static_cast<double>(N) > 2.0 * s)
                       ? 2.0 * N / (N - 2.0 * s)
                       : std::numeric_limits<double>::infinity();
    return c;
}

} // namespace relfrac::specfun
