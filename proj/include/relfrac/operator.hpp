#pragma once

#include "relfrac/grid.hpp"
#include "relfrac/radial_table.hpp"

// The operator (-Delta + m^2)^s in two independent realizations: the
// Fourier multiplier (|k|^2+m^2)^s and the symmetrized singular-integral
// form
//   m^{2s} u(x) + (C(N,s)/2) m^{(N+2s)/2}
//     int [2u(x)-u(x+y)-u(x-y)] |y|^{-(N+2s)/2} K_{(N+2s)/2}(m|y|) dy.
// Their mutual agreement on smooth data is the module's central check.

namespace relfrac::op {

struct SingularQuadratureConfig {
    double inner_cut = 0.0;    // defaults to h/2 when <= 0
    double outer_cut = 0.0;    // defaults to the Watson2 tail radius when <= 0
    bool truncated = false;    // set on output when outer_cut had to be clipped at L
    bool taylor_core = true;   // second-order Taylor model of the dropped ball
};

/// Jump kernel J_m(r) = C(N,s) m^{(N+2s)/2} r^{-(N+2s)/2} K_{(N+2s)/2}(m r),
/// with both asymptotic laws attached.
RadialKernelTable jump_kernel(int N, double s, double m);

/// Multiplier realization F^{-1}((|k|^2+m^2)^s F u).
grid::GridField apply_fourier(const grid::GridField& u, double m, double s);

/// Singular-integral realization. Midpoint rule over grid-shift nodes in
/// [inner_cut, outer_cut] with periodic wrap. The principal-value ball
/// below inner_cut contributes through its second-order Taylor model
/// -(Laplacian u / 2N) int_{|y|<inner} |y|^2 J(|y|) dy when taylor_core is
/// set, and is dropped entirely otherwise. The shift sum is evaluated
/// through a circular convolution with the sampled kernel weights
/// (identical to the direct sum up to round-off).
grid::GridField apply_singular_integral(const grid::GridField& u, double m, double s,
                                        SingularQuadratureConfig& cfg);
grid::GridField apply_singular_integral(const grid::GridField& u, double m, double s);

/// Weighted-spectrum norm (int (|k|^2+m^2)^s |Fu|^2 dk)^{1/2} by discrete
/// Plancherel.
double hs_norm(const grid::GridField& u, double m, double s);
double hs_norm_sq(const grid::GridField& u, double m, double s);

} // namespace relfrac::op
