#pragma once

#include "relfrac/grid.hpp"

// Degenerate-elliptic extension of a boundary datum: the weighted problem
//   -div(y^{1-2s} grad U) + m^2 y^{1-2s} U = 0   on the upper half space
// realized two ways (per-frequency profile theta, and a conservative
// finite-volume ODE solve on a graded mesh), plus the weighted energy and
// the trace-derivative identity.

namespace relfrac::ext {

struct GradedMesh {
    double height = 10.0; // truncation Y of the y-axis
    int count = 256;      // number of intervals; nodes j = 0..count
    double exponent = 2.0; // grading power q >= 1

    double node(int j) const { return height * std::pow(double(j) / count, exponent); }
    void validate() const;
};

struct ExtensionField {
    grid::GridSpec base;
    GradedMesh mesh;
    double s = 0.5;
    double m = 1.0;
    std::vector<grid::GridField> slices; // one per mesh node, slices[0] = boundary datum
};

/// Canonical extension by per-frequency profiles: slice j is
/// F^{-1}(theta(y_j sqrt(|k|^2+m^2)) F u). The boundary slice equals u.
ExtensionField extend_spectral(const grid::GridField& u, double m, double s,
                               const GradedMesh& mesh);

/// Cross-validating realization: per-frequency two-point boundary value
/// solve of -(y^{1-2s} W')' + (|k|^2+m^2) y^{1-2s} W = 0 with W(0) = u_hat(k)
/// and W(Y) = 0, discretized by a conservative finite-volume scheme on the
/// graded mesh.
ExtensionField extend_ode(const grid::GridField& u, double m, double s, const GradedMesh& mesh);

/// Scalar profile solve at a single frequency magnitude omega (test hook
/// for comparison against theta_profile). Returns the nodal values.
std::vector<double> solve_profile_ode(double omega, double s, const GradedMesh& mesh);

/// Weighted conormal derivative -lim_{y->0} y^{1-2s} dU/dy per boundary
/// point, extracted by fitting U(y) ~ U(0) + A y^{2s} on the smallest
/// positive nodes. Contract: equals sigma_s (-Delta+m^2)^s u for the
/// canonical extension.
grid::GridField trace_derivative(const ExtensionField& U);

/// Weighted energy norm ( iint y^{1-2s} (|grad U|^2 + m^2 U^2) dx dy )^{1/2}
/// on [0, Y]: spectral in x, interval rule in y with the weight integrated
/// exactly.
double xs_norm(const ExtensionField& U);

/// Default truncation height and grading for given (m, s).
GradedMesh default_mesh(double m, double s, int count = 256);

} // namespace relfrac::ext
