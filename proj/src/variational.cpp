#include "relfrac/variational.hpp"

#include "relfrac/operator.hpp"
#include "relfrac/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace relfrac::var {

void Nonlinearity::validate(double two_star_s) const {
    if (!(p > 1.0 && p < two_star_s - 1.0))
        throw std::invalid_argument("Nonlinearity: p outside (1, 2*_s - 1)");
}

bool PotentialSpec::in_lambda(const std::array<double, 3>& x, int dim) const {
    for (int d = 0; d < dim; ++d)
        if (x[d] < lambda_lo[d] || x[d] > lambda_hi[d]) return false;
    return true;
}

void PotentialSpec::validate(double m, double s) const {
    double m2s = std::pow(m * m, s);
    if (!(V1 > 0.0)) throw std::invalid_argument("potential: V1 <= 0");
    if (!(V1 < m2s)) throw std::invalid_argument("potential: V1 >= m^{2s}");
    if (!(V0 > 0.0 && V0 <= V1)) throw std::invalid_argument("potential: need 0 < V0 <= V1");
}

PenalizationParams PenalizationParams::make(const PotentialSpec& pot, const Nonlinearity& nl,
                                            double m, double s, bool multiplicity_mode) {
    double m2s = std::pow(m * m, s);
    double theta = nl.theta_ar();
    double kappa = 2.0 * std::max(pot.V1 / (m2s - pot.V1), theta / (theta - 2.0));
    if (multiplicity_mode) kappa = std::max(kappa, 2.0 * 2.0 * pot.V0 / (m2s - pot.V0));
    PenalizationParams pen;
    pen.kappa = kappa;
    pen.theta_ar = theta;
    // f(a)/a = V1/kappa, closed form for the pure power
    pen.a = std::pow(pot.V1 / kappa, 1.0 / (nl.p - 1.0));
    return pen;
}

double penalized_g(const std::array<double, 3>& x, double t, const PotentialSpec& pot,
                   const PenalizationParams& pen, const Nonlinearity& nl, int dim) {
    if (t <= 0.0) return 0.0;
    if (pot.in_lambda(x, dim)) return nl.f(t);
    return t < pen.a ? nl.f(t) : (pot.V1 / pen.kappa) * t;
}

double penalized_G(const std::array<double, 3>& x, double t, const PotentialSpec& pot,
                   const PenalizationParams& pen, const Nonlinearity& nl, int dim) {
    if (t <= 0.0) return 0.0;
    if (pot.in_lambda(x, dim) || t < pen.a) return nl.F(t);
    return nl.F(pen.a) + 0.5 * (pot.V1 / pen.kappa) * (t * t - pen.a * pen.a);
}

// ---------------------------------------------------------------------

PenalizedEnergy::PenalizedEnergy(double eps, PotentialSpec pot, PenalizationParams pen,
                                 Nonlinearity nl, double m, double s)
    : eps_(eps), pot_(std::move(pot)), pen_(pen), nl_(nl), m_(m), s_(s) {
    if (!(eps > 0.0)) throw std::invalid_argument("PenalizedEnergy: eps must be positive");
    pot_.validate(m, s);
}

grid::GridField PenalizedEnergy::potential_values(const grid::GridSpec& spec) const {
    if (vcache_ && vcache_->spec == spec) return *vcache_;
    grid::GridField v = grid::sample(spec, [&](const std::array<double, 3>& x) {
        return pot_.V({eps_ * x[0], eps_ * x[1], eps_ * x[2]});
    });
    vcache_ = v;
    return v;
}

double PenalizedEnergy::quad_form(const grid::GridField& u) const {
    grid::GridField v = potential_values(u.spec);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
        acc += v.values[i] * u.values[i] * u.values[i];
    return op::hs_norm_sq(u, m_, s_) + acc * u.spec.cell_volume();
}

double PenalizedEnergy::energy(const grid::GridField& u) const {
    grid::GridField v = potential_values(u.spec);
    double quad = 0.0, nonl = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        double ui = u.values[i];
        quad += v.values[i] * ui * ui;
        auto x = u.coords(i);
        nonl += penalized_G({eps_ * x[0], eps_ * x[1], eps_ * x[2]}, ui, pot_, pen_, nl_,
                            u.spec.dim);
    }
    double cell = u.spec.cell_volume();
    return 0.5 * (op::hs_norm_sq(u, m_, s_) + quad * cell) - nonl * cell;
}

grid::GridField PenalizedEnergy::gradient(const grid::GridField& u) const {
    grid::GridField g = op::apply_fourier(u, m_, s_);
    grid::GridField v = potential_values(u.spec);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        auto x = u.coords(i);
        g.values[i] += v.values[i] * u.values[i] -
                       penalized_g({eps_ * x[0], eps_ * x[1], eps_ * x[2]}, u.values[i], pot_,
                                   pen_, nl_, u.spec.dim);
    }
    return g;
}

grid::GridField PenalizedEnergy::unpenalized_gradient(const grid::GridField& u) const {
    grid::GridField g = op::apply_fourier(u, m_, s_);
    grid::GridField v = potential_values(u.spec);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        g.values[i] += v.values[i] * u.values[i] - nl_.f(u.values[i]);
    return g;
}

double PenalizedEnergy::nonlinear_pairing(const grid::GridField& u, double t) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        auto x = u.coords(i);
        acc += penalized_g({eps_ * x[0], eps_ * x[1], eps_ * x[2]}, t * u.values[i], pot_, pen_,
                           nl_, u.spec.dim) *
               u.values[i];
    }
    return acc * u.spec.cell_volume();
}

AutonomousEnergy::AutonomousEnergy(double mu, Nonlinearity nl, double m, double s)
    : mu_(mu), nl_(nl), m_(m), s_(s) {
    double m2s = std::pow(m * m, s);
    if (!(mu > -m2s))
        throw std::invalid_argument("AutonomousEnergy: mu <= -m^{2s} (norm equivalence fails)");
}

double AutonomousEnergy::quad_form(const grid::GridField& u) const {
    double l2 = grid::inner(u, u);
    return op::hs_norm_sq(u, m_, s_) + mu_ * l2;
}

double AutonomousEnergy::energy(const grid::GridField& u) const {
    double nonl = 0.0;
    for (double v : u.values) nonl += nl_.F(v);
    return 0.5 * quad_form(u) - nonl * u.spec.cell_volume();
}

grid::GridField AutonomousEnergy::gradient(const grid::GridField& u) const {
    grid::GridField g = op::apply_fourier(u, m_, s_);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        g.values[i] += mu_ * u.values[i] - nl_.f(u.values[i]);
    return g;
}

double AutonomousEnergy::nonlinear_pairing(const grid::GridField& u, double t) const {
    double acc = 0.0;
    for (double v : u.values) acc += nl_.f(t * v) * v;
    return acc * u.spec.cell_volume();
}

// ---------------------------------------------------------------------

namespace {

double hs_residual_norm(const grid::GridField& r, double m, double s) {
    return op::hs_norm(r, m, -s); // (|k|^2+m^2)^{-s} weighted spectrum norm
}

template <typename Model>
double precond_shift(const Model&) {
    return 1.0;
}

template <>
double precond_shift<AutonomousEnergy>(const AutonomousEnergy& model) {
    return std::max(model.mu(), 0.0) + 1.0;
}

template <typename Model>
grid::GridField precondition(const Model& model, const grid::GridField& g) {
    double m = model.m(), s = model.s();
    double shift = precond_shift(model);
    return grid::apply_radial_multiplier(
        g, [m, s, shift](double k2) { return 1.0 / (std::pow(k2 + m * m, s) + shift); });
}

} // namespace

template <typename Model>
NehariPoint nehari_project(const grid::GridField& u, const Model& model) {
    double Q = model.quad_form(u);
    if (!(Q > 0.0)) throw std::runtime_error("nehari_project: nonpositive quadratic form");

    double t = 0.0;
    if (model.autonomous_pure_power()) {
        double p = model.nonlinearity().p;
        double S = model.nonlinear_pairing(u, 1.0); // = int (u^+)^{p+1}
        if (!(S > 0.0)) throw std::runtime_error("nehari_project: trivial positive part");
        t = std::pow(Q / S, 1.0 / (p - 1.0));
    } else {
        auto phi = [&](double tt) { return tt * Q - model.nonlinear_pairing(u, tt); };
        double hi = 1.0;
        int guard = 0;
        while (phi(hi) > 0.0) {
            hi *= 2.0;
            if (++guard > 80)
                throw std::runtime_error("nehari_project: no sign change (u outside the cone)");
        }
        double lo = hi * 0.5;
        guard = 0;
        while (phi(lo) <= 0.0) {
            lo *= 0.5;
            if (++guard > 120)
                throw std::runtime_error("nehari_project: no positive bracket endpoint");
        }
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (phi(mid) > 0.0 ? lo : hi) = mid;
        }
        t = 0.5 * (lo + hi);
    }

    NehariPoint out;
    out.t_u = t;
    out.u = u;
    grid::scale(out.u, t);
    out.energy = model.energy(out.u);
    out.residual = hs_residual_norm(model.gradient(out.u), model.m(), model.s());
    return out;
}

template NehariPoint nehari_project<PenalizedEnergy>(const grid::GridField&,
                                                     const PenalizedEnergy&);
template NehariPoint nehari_project<AutonomousEnergy>(const grid::GridField&,
                                                      const AutonomousEnergy&);

template <typename Model>
SolveResult descend(const Model& model, const grid::GridField& init, const SolverConfig& cfg) {
    SolveResult res;
    NehariPoint cur = nehari_project(init, model);
    double eta = cfg.eta0;
    // Once energy decreases fall below double-precision resolution the line
    // search stalls; from there the iteration switches to an unconditional
    // fixed-step preconditioned fixed point, monitored by the residual norm.
    bool polish = false;
    double best_rnorm = std::numeric_limits<double>::infinity();
    int since_best = 0;
    int it = 0;
    for (; it < cfg.max_iters; ++it) {
        grid::GridField g = model.gradient(cur.u);
        grid::GridField pg = precondition(model, g);
        double rnorm = grid::l2_norm(pg);
        res.residual_history.push_back(rnorm);
        if (rnorm < cfg.tol) {
            res.converged = true;
            break;
        }
        if (polish) {
            if (rnorm > 2.0 * best_rnorm) {
                eta *= 0.5;
                since_best = 0;
            } else if (rnorm < best_rnorm * (1.0 - 1e-3)) {
                best_rnorm = rnorm;
                since_best = 0;
            } else if (++since_best > 50) {
                eta *= 0.5;
                since_best = 0;
            }
            if (eta < 1e-4) break; // residual floor reached
            NehariPoint cand;
            try {
                cand = nehari_project(grid::axpy(-eta, pg, cur.u), model);
            } catch (const std::runtime_error&) {
                break;
            }
            cur = std::move(cand);
            continue;
        }
        bool moved = false;
        while (eta > 1e-14) {
            grid::GridField trial = grid::axpy(-eta, pg, cur.u);
            NehariPoint cand;
            try {
                cand = nehari_project(trial, model);
            } catch (const std::runtime_error&) {
                eta *= 0.5;
                continue;
            }
            if (cand.energy < cur.energy - 1e-16 * std::abs(cur.energy)) {
                cur = std::move(cand);
                moved = true;
                eta = std::min(eta * 1.5, 4.0);
                break;
            }
            eta *= 0.5;
        }
        if (!moved) { // energy resolution exhausted: enter the polish phase
            polish = true;
            eta = std::min(cfg.eta0, 0.5);
            best_rnorm = rnorm;
            since_best = 0;
        }
    }
    cur.residual = hs_residual_norm(model.gradient(cur.u), model.m(), model.s());
    res.point = std::move(cur);
    res.iterations = it;
    return res;
}

template SolveResult descend<PenalizedEnergy>(const PenalizedEnergy&, const grid::GridField&,
                                              const SolverConfig&);
template SolveResult descend<AutonomousEnergy>(const AutonomousEnergy&, const grid::GridField&,
                                               const SolverConfig&);

namespace {

grid::GridField initial_bump(const grid::GridSpec& spec, unsigned seed) {
    if (seed == 0) {
        return grid::sample(spec, [](const std::array<double, 3>& x) {
            double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            return std::exp(-0.5 * r2);
        });
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.5, 1.5), width(0.7, 2.0),
        pos(-spec.half_width / 4.0, spec.half_width / 4.0);
    struct Bump {
        double a, w;
        std::array<double, 3> b;
    };
    std::vector<Bump> bumps;
    for (int i = 0; i < 3; ++i) {
        Bump bb;
        bb.a = amp(rng);
        bb.w = width(rng);
        for (int d = 0; d < spec.dim; ++d) bb.b[d] = pos(rng);
        bumps.push_back(bb);
    }
    return grid::sample(spec, [&](const std::array<double, 3>& x) {
        double v = 0.0;
        for (const auto& bb : bumps) {
            double r2 = 0.0;
            for (int d = 0; d < spec.dim; ++d) r2 += (x[d] - bb.b[d]) * (x[d] - bb.b[d]);
            v += bb.a * std::exp(-r2 / (2.0 * bb.w * bb.w));
        }
        return v;
    });
}

// Positive-part cleanup: round-off scale negative overshoot is zeroed;
// larger negative parts raise the violation flag via the return value.
bool positive_cleanup(grid::GridField& u) {
    double linf = grid::linf_norm(u);
    double tol = 1e-6 * linf;
    bool violated = false;
    for (double& v : u.values) {
        if (v < 0.0) {
            if (v < -tol) violated = true;
            v = 0.0;
        }
    }
    return violated;
}

} // namespace

SolveResult ground_state(double mu, const Nonlinearity& nl, double m, double s,
                         const grid::GridSpec& spec, const SolverConfig& cfg) {
    AutonomousEnergy model(mu, nl, m, s);
    grid::GridField init = initial_bump(spec, cfg.seed);
    SolveResult res = descend(model, init, cfg);
    bool violated = positive_cleanup(res.point.u);
    if (violated) res.converged = false;
    res.point.energy = model.energy(res.point.u);
    res.point.residual = hs_residual_norm(model.gradient(res.point.u), m, s);
    return res;
}

SolveResult solve_penalized(double eps, const PenalizedEnergy& model, const grid::GridSpec& spec,
                            const grid::GridField* init, const SolverConfig& cfg) {
    // Lambda/eps must fit inside the box with decay margin.
    const PotentialSpec& pot = model.potential();
    for (int d = 0; d < spec.dim; ++d) {
        double reach = std::max(std::abs(pot.lambda_lo[d]), std::abs(pot.lambda_hi[d])) / eps;
        if (reach > 0.9 * spec.half_width)
            throw std::invalid_argument(
                "solve_penalized: Lambda/eps exceeds the box (infeasible eps at desk scale)");
    }
    grid::GridField start = init ? *init : grid::GridField();
    if (!init) {
        // default initial iterate: cutoff autonomous ground state at a
        // minimizer of V
        SolverConfig gcfg = cfg;
        gcfg.seed = 0;
        SolveResult gs = ground_state(pot.V({0, 0, 0}), model.nonlinearity(), model.m(),
                                      model.s(), spec, gcfg);
        double delta = 0.25 * (pot.lambda_hi[0] - pot.lambda_lo[0]);
        NehariPoint phi = make_phi({0, 0, 0}, eps, model, gs.point.u, delta);
        start = phi.u;
    }
    SolveResult res = descend(model, start, cfg);
    bool violated = positive_cleanup(res.point.u);
    if (violated) res.converged = false;
    res.point.energy = model.energy(res.point.u);
    res.point.residual =
        hs_residual_norm(model.gradient(res.point.u), model.m(), model.s());
    return res;
}

DecayFit decay_fit(const grid::GridField& u, const std::array<double, 3>& center, double r_lo,
                   double r_hi) {
    const grid::GridSpec& spec = u.spec;
    double h = spec.spacing();
    int nbins = static_cast<int>(std::ceil((r_hi - r_lo) / h));
    if (nbins < 4) throw std::invalid_argument("decay_fit: window too narrow");
    std::vector<double> acc(nbins, 0.0), racc(nbins, 0.0);
    std::vector<int> cnt(nbins, 0);
    double box = 2.0 * spec.half_width;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        auto x = u.coords(i);
        double r2 = 0.0;
        for (int d = 0; d < spec.dim; ++d) {
            double dx = std::remainder(x[d] - center[d], box); // min-image
            r2 += dx * dx;
        }
        double r = std::sqrt(r2);
        if (r < r_lo || r >= r_hi) continue;
        int b = static_cast<int>((r - r_lo) / h);
        acc[b] += u.values[i];
        racc[b] += r;
        cnt[b] += 1;
    }
    std::vector<double> rs, lv, llr;
    for (int b = 0; b < nbins; ++b) {
        if (cnt[b] == 0) continue;
        double mean = acc[b] / cnt[b];
        if (!(mean > 0.0))
            throw std::runtime_error("decay_fit: nonpositive radial average in window");
        double r = racc[b] / cnt[b]; // mean sample radius, not the bin center
        rs.push_back(r);
        lv.push_back(std::log(mean));
        llr.push_back(std::log(r));
    }
    auto line_fit = [](const std::vector<double>& x, const std::vector<double>& y, double& a,
                       double& b, double& r2) {
        std::size_t n = x.size();
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        a = (sy - b * sx) / n;
        double ss_res = 0, ss_tot = 0, ym = sy / n;
        for (std::size_t i = 0; i < n; ++i) {
            double fit = a + b * x[i];
            ss_res += (y[i] - fit) * (y[i] - fit);
            ss_tot += (y[i] - ym) * (y[i] - ym);
        }
        r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    };
    DecayFit fit;
    double a, b;
    line_fit(rs, lv, a, b, fit.r2_exp);
    fit.C = std::exp(a);
    fit.c = -b;
    double ap, bp;
    line_fit(llr, lv, ap, bp, fit.r2_pow);
    return fit;
}

NehariPoint make_phi(const std::array<double, 3>& z, double eps, const PenalizedEnergy& model,
                     const grid::GridField& ground, double delta) {
    const grid::GridSpec& spec = ground.spec;
    double h = spec.spacing();
    std::array<int, 3> shift{0, 0, 0};
    for (int d = 0; d < spec.dim; ++d)
        shift[d] = static_cast<int>(std::lround(z[d] / (eps * h)));

    auto ramp = [delta](double t) {
        if (t <= 0.5 * delta) return 1.0;
        if (t >= delta) return 0.0;
        double tau = (t - 0.5 * delta) / (0.5 * delta);
        return 1.0 - (3.0 * tau * tau - 2.0 * tau * tau * tau); // C^1 cubic
    };

    grid::GridField psi(spec);
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
        auto ix = psi.unflatten(i);
        auto x = psi.coords(i);
        double r2 = 0.0;
        std::array<int, 3> src = ix;
        for (int d = 0; d < spec.dim; ++d) {
            double dd = eps * x[d] - z[d];
            r2 += dd * dd;
            src[d] = ix[d] - shift[d];
        }
        double eta = ramp(std::sqrt(r2));
        psi.values[i] = eta > 0.0 ? eta * ground.values[ground.flatten(src)] : 0.0;
    }
    return nehari_project(psi, model);
}

std::array<double, 3> barycenter(const grid::GridField& u, double eps, double rho) {
    double den = 0.0;
    std::array<double, 3> num{0, 0, 0};
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        double w = u.values[i] * u.values[i];
        if (w == 0.0) continue;
        auto x = u.coords(i);
        std::array<double, 3> y{eps * x[0], eps * x[1], eps * x[2]};
        double r = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
        if (r >= rho) {
            for (auto& c : y) c *= rho / r; // clamp to the ball of radius rho
        }
        for (int d = 0; d < u.spec.dim; ++d) num[d] += y[d] * w;
        den += w;
    }
    if (!(den > 0.0)) throw std::domain_error("barycenter: field is identically zero");
    for (auto& c : num) c /= den;
    return num;
}

grid::GridSpec sweep_grid(const GridPolicy& policy, const PotentialSpec& pot, double eps,
                          int dim) {
    double reach = 0.0;
    for (int d = 0; d < dim; ++d)
        reach = std::max({reach, std::abs(pot.lambda_lo[d]), std::abs(pot.lambda_hi[d])});
    double L = std::max(16.0 / policy.c_hat, 2.0 * reach / eps);
    double h_target = (16.0 / policy.c_hat) / 512.0;
    int n = policy.min_points;
    while (2.0 * L / n > h_target && n < policy.max_points) n *= 2;
    grid::GridSpec spec;
    spec.dim = dim;
    spec.half_width = L;
    spec.n = n;
    return spec;
}

SweepReport epsilon_sweep(const PotentialSpec& pot, const Nonlinearity& nl, double m, double s,
                          const GridPolicy& policy, const std::vector<double>& eps_list,
                          bool multiplicity_mode, const SolverConfig& cfg) {
    std::vector<double> eps_sorted = eps_list;
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());
    PenalizationParams pen = PenalizationParams::make(pot, nl, m, s, multiplicity_mode);

    SweepReport report;
    for (double eps : eps_sorted) {
        SweepRecord rec;
        rec.eps = eps;
        try {
            grid::GridSpec spec = sweep_grid(policy, pot, eps, 1);
            PenalizedEnergy model(eps, pot, pen, nl, m, s);
            SolveResult res = solve_penalized(eps, model, spec, nullptr, cfg);
            if (!res.converged)
                throw std::runtime_error("solver did not converge (residual " +
                                         std::to_string(res.point.residual) + ")");
            const grid::GridField& u = res.point.u;
            // argmax with lexicographically smallest index on ties
            std::size_t best = 0;
            for (std::size_t i = 1; i < u.values.size(); ++i)
                if (u.values[i] > u.values[best]) best = i;
            auto xmax = u.coords(best);
            rec.argmax = xmax;
            std::array<double, 3> slow{eps * xmax[0], eps * xmax[1], eps * xmax[2]};
            rec.V_at_eps_argmax = pot.V(slow);
            rec.c_eps = res.point.energy;
            rec.linf = u.values[best];
            double sup_out = 0.0;
            for (std::size_t i = 0; i < u.values.size(); ++i) {
                auto x = u.coords(i);
                std::array<double, 3> sx{eps * x[0], eps * x[1], eps * x[2]};
                if (!pot.in_lambda(sx, u.spec.dim)) sup_out = std::max(sup_out, u.values[i]);
            }
            rec.sup_outside_lambda = sup_out;
            rec.penalization_consistent = sup_out < pen.a;
            double r_hi = std::min(10.0, 0.8 * u.spec.half_width);
            rec.decay = decay_fit(u, xmax, 4.0, r_hi);
            rec.dist_to_well = pot.dist_to_well ? pot.dist_to_well(slow) : 0.0;
            rec.solved = true;
        } catch (const std::exception& e) {
            rec.solved = false;
            rec.error = e.what();
        }
        report.records.push_back(std::move(rec));
    }
    return report;
}

} // namespace relfrac::var
