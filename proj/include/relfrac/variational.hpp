#pragma once

#include "relfrac/grid.hpp"

#include <optional>
#include <string>

// Penalized nonlinearity, trace-side energy functionals, Nehari
// projection, ground-state descent, the epsilon sweep, the cutoff test
// function, the barycenter map, and decay fitting.
//
// The artifact minimizes the trace functional
//   J_eps(u) = 1/2 int ((|k|^2+m^2)^s |u_hat|^2 + V(eps x) u^2)
//              - int G_eps(x, u)
// with the multiplier realized spectrally; the half-space formulation is
// equivalent up to the constant sigma_s, validated by the extension
// module.

namespace relfrac::var {

struct Nonlinearity {
    double p = 3.0; // pure power (t^+)^p, 1 < p < 2*_s - 1

    double f(double t) const { return t > 0.0 ? std::pow(t, p) : 0.0; }
    double F(double t) const { return t > 0.0 ? std::pow(t, p + 1.0) / (p + 1.0) : 0.0; }
    double theta_ar() const { return p + 1.0; }
    void validate(double two_star_s) const;
};

struct PotentialSpec {
    std::function<double(const std::array<double, 3>&)> V;
    std::array<double, 3> lambda_lo{0, 0, 0}; // box Lambda
    std::array<double, 3> lambda_hi{0, 0, 0};
    double V0 = 0.0; // well depth: -V0 = inf_Lambda V
    double V1 = 0.0; // global bound: -V1 = inf V
    /// distance from a (slow-variable) point to the well set M
    std::function<double(const std::array<double, 3>&)> dist_to_well;

    bool in_lambda(const std::array<double, 3>& x, int dim) const;
    void validate(double m, double s) const; // (V1): 0 < V1 < m^{2s}
};

struct PenalizationParams {
    double kappa = 0.0;
    double a = 0.0; // switch height, f(a)/a = V1/kappa
    double theta_ar = 0.0;

    /// kappa = 2 max{V1/(m^{2s}-V1), theta/(theta-2)}; multiplicity mode
    /// additionally enforces kappa >= 2 * 2V0/(m^{2s}-V0).
    static PenalizationParams make(const PotentialSpec& pot, const Nonlinearity& nl, double m,
                                   double s, bool multiplicity_mode = false);
};

struct NehariPoint {
    grid::GridField u; // the projected field t_u * u_input
    double t_u = 1.0;
    double energy = 0.0;
    double residual = 0.0; // H^{-s} norm of the Euler-Lagrange gradient
};

/// Penalized Caratheodory nonlinearity in the slow variable x:
/// f(t) inside Lambda; outside, f(t) below the switch height a and
/// (V1/kappa) t above it. Zero for t <= 0.
double penalized_g(const std::array<double, 3>& x, double t, const PotentialSpec& pot,
                   const PenalizationParams& pen, const Nonlinearity& nl, int dim);
double penalized_G(const std::array<double, 3>& x, double t, const PotentialSpec& pot,
                   const PenalizationParams& pen, const Nonlinearity& nl, int dim);

// ---------------------------------------------------------------------
// Energy models. Both expose the same surface so the solver is shared.

class PenalizedEnergy {
  public:
    PenalizedEnergy(double eps, PotentialSpec pot, PenalizationParams pen, Nonlinearity nl,
                    double m, double s);

    double energy(const grid::GridField& u) const;
    grid::GridField gradient(const grid::GridField& u) const;
    /// quadratic form ||u||^2 = hs_norm^2 + int V(eps x) u^2
    double quad_form(const grid::GridField& u) const;
    /// int g(eps x, t u) u dx (for the Nehari scaling equation)
    double nonlinear_pairing(const grid::GridField& u, double t) const;
    bool autonomous_pure_power() const { return false; }

    double m() const { return m_; }
    double s() const { return s_; }
    double eps() const { return eps_; }
    const PotentialSpec& potential() const { return pot_; }
    const PenalizationParams& penalization() const { return pen_; }
    const Nonlinearity& nonlinearity() const { return nl_; }

    /// Euler-Lagrange residual of the *unpenalized* problem (g == f).
    grid::GridField unpenalized_gradient(const grid::GridField& u) const;

  private:
    grid::GridField potential_values(const grid::GridSpec& spec) const;
    double eps_;
    PotentialSpec pot_;
    PenalizationParams pen_;
    Nonlinearity nl_;
    double m_, s_;
    mutable std::optional<grid::GridField> vcache_;
};

class AutonomousEnergy {
  public:
    AutonomousEnergy(double mu, Nonlinearity nl, double m, double s);

    double energy(const grid::GridField& u) const;
    grid::GridField gradient(const grid::GridField& u) const;
    double quad_form(const grid::GridField& u) const;
    double nonlinear_pairing(const grid::GridField& u, double t) const;
    bool autonomous_pure_power() const { return true; }

    double m() const { return m_; }
    double s() const { return s_; }
    double mu() const { return mu_; }
    const Nonlinearity& nonlinearity() const { return nl_; }

  private:
    double mu_;
    Nonlinearity nl_;
    double m_, s_;
};

// ---------------------------------------------------------------------

/// Unique positive Nehari scaling t_u with <J'(t u), u> = 0; closed form
/// for the autonomous pure power, bracketing plus bisection otherwise.
/// Throws std::runtime_error when no sign change is found (u outside the
/// admissible cone numerically).
template <typename Model>
NehariPoint nehari_project(const grid::GridField& u, const Model& model);

struct SolverConfig {
    double tol = 1e-8;        // preconditioned residual target
    int max_iters = 40000;
    double eta0 = 1.0;        // initial step
    unsigned seed = 0;        // for randomized initials (0 = deterministic bump)
};

struct SolveResult {
    NehariPoint point;
    bool converged = false;
    int iterations = 0;
    std::vector<double> residual_history;
};

/// Nehari-constrained preconditioned descent for either model.
template <typename Model>
SolveResult descend(const Model& model, const grid::GridField& init, const SolverConfig& cfg);

/// Autonomous ground state: returns the solution and d_mu.
SolveResult ground_state(double mu, const Nonlinearity& nl, double m, double s,
                         const grid::GridSpec& spec, const SolverConfig& cfg = {});

/// Penalized solve at fixed eps; the initial iterate defaults to the
/// cutoff ground state placed at a minimizer of V. Throws
/// std::invalid_argument when Lambda/eps does not fit the box.
SolveResult solve_penalized(double eps, const PenalizedEnergy& model, const grid::GridSpec& spec,
                            const grid::GridField* init = nullptr,
                            const SolverConfig& cfg = {});

struct DecayFit {
    double C = 0.0, c = 0.0;  // u ~ C e^{-c r}
    double r2_exp = 0.0;      // fit quality of the exponential model
    double r2_pow = 0.0;      // fit quality of the power-law model
};

/// Least-squares fits of log u vs r (exponential) and log u vs log r
/// (power law) on radially averaged data over [r_lo, r_hi].
DecayFit decay_fit(const grid::GridField& u, const std::array<double, 3>& center, double r_lo,
                   double r_hi);

/// Cutoff translated autonomous ground state with its Nehari scaling:
/// Psi(x) = eta(|eps x - z|) w(x - z/eps), eta a C^1 cubic ramp between
/// delta/2 and delta, then projected onto the Nehari manifold.
NehariPoint make_phi(const std::array<double, 3>& z, double eps, const PenalizedEnergy& model,
                     const grid::GridField& ground, double delta);

/// Clamped barycenter: int Upsilon(eps x) u^2 / int u^2 with Upsilon the
/// radial clamp to the ball of radius rho.
std::array<double, 3> barycenter(const grid::GridField& u, double eps, double rho);

struct SweepRecord {
    double eps = 0.0;
    bool solved = false;
    std::string error;
    std::array<double, 3> argmax{0, 0, 0}; // x_eps (grid point, lexicographic tie-break)
    double V_at_eps_argmax = 0.0;
    double c_eps = 0.0;
    double sup_outside_lambda = 0.0;
    bool penalization_consistent = false; // sup outside < a
    DecayFit decay;
    double linf = 0.0;
    double dist_to_well = 0.0; // dist(eps x_eps, M)
};

struct SweepReport {
    std::vector<SweepRecord> records; // sorted by decreasing eps
};

struct GridPolicy {
    double c_hat = 1.0;    // anticipated decay rate
    int max_points = 4096; // cap on points per axis
    int min_points = 1024;
};

grid::GridSpec sweep_grid(const GridPolicy& policy, const PotentialSpec& pot, double eps,
                          int dim);

SweepReport epsilon_sweep(const PotentialSpec& pot, const Nonlinearity& nl, double m, double s,
                          const GridPolicy& policy, const std::vector<double>& eps_list,
                          bool multiplicity_mode = false, const SolverConfig& cfg = {});

} // namespace relfrac::var
