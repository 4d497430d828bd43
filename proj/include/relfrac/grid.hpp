#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "relfrac/radial_table.hpp"

// Periodic-box function representation and the discrete Fourier machinery.
//
// Conventions (fixed once, inherited by every module):
//   - the box is [-L, L)^dim with n samples per axis, spacing h = 2L/n;
//     sample i on an axis sits at x_i = -L + i h.
//   - frequencies are k_j = (pi/L) f(j) with f(j) = j for j < n/2 and
//     j - n otherwise.
//   - transform():  c_k = (1/n^dim) sum_x u(x) e^{-i k.(index)}  (index
//     phases, i.e. relative to the corner sample; radial multipliers and
//     convolutions are phase-insensitive).
//   - inverse_transform(): u(x) = sum_k c_k e^{+i k.(index)}.
//   - discrete Parseval: h^dim sum_x |u|^2 = (2L)^dim sum_k |c_k|^2.

namespace relfrac::grid {

struct GridSpec {
    int dim = 1;             // in {1,2,3}
    double half_width = 1.0; // L
    int n = 16;              // samples per axis, power of two, >= 16

    double spacing() const { return 2.0 * half_width / n; }
    std::size_t size() const {
        std::size_t s = 1;
        for (int d = 0; d < dim; ++d) s *= static_cast<std::size_t>(n);
        return s;
    }
    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= spacing();
        return v;
    }
    double box_volume() const {
        double v = 1.0;
        for (int d = 0; d < dim; ++d) v *= 2.0 * half_width;
        return v;
    }
    /// Physical frequency for axis index j.
    double freq(int j) const {
        int f = (j < n / 2) ? j : j - n;
        return M_PI / half_width * f;
    }
    /// Physical coordinate for axis index i.
    double coord(int i) const { return -half_width + i * spacing(); }

    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

struct GridField {
    GridSpec spec;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(const GridSpec& sp) : spec(sp), values(sp.size(), 0.0) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    /// Lexicographic index -> per-axis indices.
    std::array<int, 3> unflatten(std::size_t idx) const;
    std::size_t flatten(const std::array<int, 3>& ix) const;
    /// Physical coordinates of sample idx (unused axes zero).
    std::array<double, 3> coords(std::size_t idx) const;
};

struct SpectrumField {
    GridSpec spec;
    std::vector<std::complex<double>> coeff;
};

/// Fill a field from a function of physical coordinates.
GridField sample(const GridSpec& spec,
                 const std::function<double(const std::array<double, 3>&)>& f);

SpectrumField transform(const GridField& u);
GridField inverse_transform(const SpectrumField& s);

/// F^{-1}(symbol(k) F u). The symbol receives the frequency vector
/// (unused axes zero). Throws std::runtime_error naming the frequency if
/// the symbol is non-finite there.
GridField apply_multiplier(const GridField& u,
                           const std::function<double(const std::array<double, 3>&)>& symbol);

/// As above with symbol a function of |k|^2 only.
GridField apply_radial_multiplier(const GridField& u,
                                  const std::function<double(double)>& symbol_of_k2);

// Discrete inner products / norms on the box (continuum normalization).
double inner(const GridField& a, const GridField& b);
double l2_norm(const GridField& u);
double linf_norm(const GridField& u);

GridField axpy(double alpha, const GridField& x, const GridField& y); // alpha*x + y
void scale(GridField& u, double alpha);

struct ConvolutionResult {
    GridField field;
    bool truncated = false; // kernel tail above tolerance at radius L
    double tail_value = 0.0;
};

/// Continuum convolution (u * K)(x) = int K(|x-z|) u(z) dz, realized as a
/// discrete circular convolution through spectral multiplication with the
/// sampled kernel's transform. The kernel is sampled at min-image radii;
/// the origin cell takes the kernel's analytic cell average when a small-r
/// power law is available.
ConvolutionResult convolve_radial(const GridField& u, const RadialKernelTable& kernel,
                                  double tail_tolerance = 1e-10);

} // namespace relfrac::grid
