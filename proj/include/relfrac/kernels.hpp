#pragma once

#include "relfrac/grid.hpp"
#include "relfrac/radial_table.hpp"

// The named kernels: Poisson kernel P_{s,m}, Bessel potential G_alpha,
// relativistic stable density p_{s,m}, Levy measure nu^m, and the
// comparison kernel B_{2s,m} behind the exponential-decay estimate.

namespace relfrac::kernels {

/// Surface measure of the unit sphere in R^N (N in {1,2,3}).
double sphere_measure(int N);

/// Poisson kernel for the extension problem,
///   P_{s,m}(x,y) = c' y^{2s} m^{(N+2s)/2} |(x,y)|^{-(N+2s)/2}
///                  K_{(N+2s)/2}(m |(x,y)|),
/// with c' calibrated once per (N,s,m) so that the x-integral at the
/// reference height y = 1 equals theta(m).
class PoissonKernel {
  public:
    PoissonKernel(int N, double s, double m);

    /// Kernel value at horizontal radius r and height y > 0.
    double operator()(double r, double y) const;
    /// int_{R^N} P(x,y) dx by radial quadrature.
    double integral(double y) const;
    double normalization() const { return cprime_; }

    int N() const { return N_; }
    double s() const { return s_; }
    double m() const { return m_; }

    /// Radial table at fixed height y (for convolution).
    RadialKernelTable slice(double y) const;

  private:
    double raw(double r, double y) const; // kernel without c'
    double raw_integral(double y) const;
    int N_;
    double s_, m_, nu_, cprime_;
};

/// Bessel potential kernel G_alpha(r) in dimension N; singular at r = 0
/// for alpha < N.
double bessel_potential_kernel(double alpha, double r, int N);

/// Small-r power law of G_alpha for 0 < alpha < N.
PowerLaw bessel_potential_small_law(double alpha, int N);

/// RadialKernelTable for G_alpha with both asymptotic laws attached.
RadialKernelTable bessel_potential_table(double alpha, int N);

/// Relativistic 2s-stable density at time t sampled on the grid, via
/// inverse transform of the characteristic function
/// exp(-t[(|k|^2+m^2)^s - m^{2s}]). The result is in the index frame:
/// the density is centered at sample index 0 and the radius of sample i
/// is the min-image distance i*h. Throws std::runtime_error when the
/// density is unresolved at the grid spacing.
grid::GridField relativistic_density(const grid::GridSpec& spec, double t, double m, double s);

/// Closed form of the density at s = 1/2 (radius form).
double relativistic_density_half(double r, double t, double m, int N);

/// Gaussian heat kernel g_t(x) at radius r in dimension N.
double gaussian_heat(double r, double t, int N);

/// Levy measure of the relativistic process with parameter m.
double levy_measure(double r, double m, double s, int N);

struct ComparisonKernelSpec {
    double m = 1.0;
    double s = 0.5;
    double V1 = 0.0;    // 0 < V1 < m^{2s}
    double delta = 0.0; // V1 + delta < m^{2s}

    double gamma() const;
    void validate() const; // throws std::invalid_argument if gamma <= 0
};

struct ComparisonKernel {
    ComparisonKernelSpec spec;
    grid::GridField field;   // B_{2s,m} sampled on the grid
    RadialKernelTable table; // radial extraction

    double operator()(double r) const { return table(r); }
};

/// B_{2s,m} = int_0^inf e^{-gamma t} p_{s,m}(.,t) dt by log-spaced time
/// quadrature of the density route, truncated where e^{-gamma T} < 1e-12.
ComparisonKernel build_comparison_kernel(const ComparisonKernelSpec& spec,
                                         const grid::GridSpec& gspec, int time_nodes = 400);

/// Same time quadrature with the s = 1/2 closed-form density (cross-check
/// oracle; requires spec.s == 0.5).
double comparison_kernel_closed_half(const ComparisonKernelSpec& spec, double r, int N,
                                     int time_nodes = 400);

} // namespace relfrac::kernels
