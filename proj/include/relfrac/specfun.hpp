#pragma once

#include <stdexcept>

// Scalar special functions shared by every kernel in the library:
// the Gamma function, the modified Bessel function of the third kind
// K_nu, the extension profile theta, and the constants sigma_s, C(N,s).

namespace relfrac::specfun {

/// Gamma function for positive real arguments. Throws std::domain_error
/// for x <= 0.
double gamma_fn(double x);

struct BesselKResult {
    double value = 0.0;
    bool saturated = false; // value clipped at DBL_MAX (tiny r, large nu)
};

/// K_nu(r) with an explicit overflow flag. Half-integer orders are served
/// by the closed forms, moderate r by quadrature of the integral
/// representation K_nu(r) = int_0^inf exp(-r cosh t) cosh(nu t) dt, and
/// r beyond the switch radius by the asymptotic series truncated at its
/// smallest term.
BesselKResult bessel_k_checked(double nu, double r);

/// K_nu(r), saturating to DBL_MAX on overflow. Throws std::domain_error
/// for r <= 0.
double bessel_k(double nu, double r);

/// Switch radius between quadrature and the asymptotic series.
inline constexpr double kBesselSwitchRadius = 25.0;

/// theta(r) = (2/Gamma(s)) (r/2)^s K_s(r), with theta(0) = 1 taken as the
/// small-r limit. Monotone nonincreasing, values in (0, 1].
double theta_profile(double s, double r);

struct OperatorConstants {
    int N = 0;
    double s = 0.0;
    double m = 0.0;
    double sigma_s = 0.0;    // 2^{1-2s} Gamma(1-s)/Gamma(s)
    double c_ns = 0.0;       // singular-integral constant C(N,s)
    double two_star_s = 0.0; // 2N/(N-2s)
};

/// Populates all constants. Throws std::invalid_argument unless N > 2s,
/// m > 0 and 0 < s < 1.
OperatorConstants operator_constants(int N, double s, double m);

} // namespace relfrac::specfun
