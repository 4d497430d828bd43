#include "relfrac/checks.hpp"
#include "relfrac/config.hpp"
#include "relfrac/extension.hpp"
#include "relfrac/io.hpp"
#include "relfrac/kernels.hpp"
#include "relfrac/operator.hpp"
#include "relfrac/specfun.hpp"
#include "relfrac/variational.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

// relfrac <command> [--config <file>] [--key value ...]
//   op-check         multiplier vs singular-integral error table
//   kernel           radial kernel dump with fitted tail law
//   extend-check     extension trace-identity error table
//   ground-state     autonomous ground state + decay fit
//   sweep            penalized solves over an eps list
//   barycenter-check cutoff test-function and barycenter limits table
//   check-suite      run every acceptance check, one pass/fail line each
// exit codes: 0 ok, 2 config error, 3 numerical failure

namespace {

using namespace relfrac;

struct RunContext {
    config::Config cfg;
    std::string out_dir;

    std::string path(const std::string& name) const { return out_dir + "/" + name; }

    void manifest(const std::string& command) const {
        std::vector<std::pair<std::string, std::string>> entries;
        entries.emplace_back("command", command);
        for (const auto& [k, v] : cfg.entries()) entries.emplace_back(k, v);
        io::write_manifest(path(command + ".manifest"), entries);
    }
};

grid::GridSpec grid_from(const config::Config& cfg) {
    grid::GridSpec spec;
    spec.dim = cfg.get_int("N", 1);
    spec.half_width = cfg.get_double("L", 16.0 / 0.9);
    spec.n = cfg.get_int("n", 512);
    spec.validate();
    return spec;
}

var::Nonlinearity nonlinearity_from(const config::Config& cfg) {
    var::Nonlinearity nl;
    nl.p = cfg.get_double("p", 3.0);
    return nl;
}

// single Gaussian well of depth V0 centered at the origin, Lambda = (-2, 2)^N
var::PotentialSpec potential_from(const config::Config& cfg) {
    double V0 = cfg.get_double("V0", 0.5);
    double lam = cfg.get_double("lambda", 2.0);
    var::PotentialSpec pot;
    pot.V = [V0](const std::array<double, 3>& x) {
        return -V0 * std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    };
    pot.lambda_lo = {-lam, -lam, -lam};
    pot.lambda_hi = {lam, lam, lam};
    pot.V0 = V0;
    pot.V1 = cfg.get_double("V1", V0);
    pot.dist_to_well = [](const std::array<double, 3>& x) {
        return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    };
    return pot;
}

var::SolverConfig solver_from(const config::Config& cfg) {
    var::SolverConfig sc;
    sc.tol = cfg.get_double("tol", 1e-8);
    sc.max_iters = cfg.get_int("max_iters", 40000);
    sc.seed = static_cast<unsigned>(cfg.get_int("seed", 0));
    return sc;
}

int cmd_op_check(RunContext& ctx) {
    double m = ctx.cfg.get_double("m", 1.0), s = ctx.cfg.get_double("s", 0.3);
    double L = ctx.cfg.get_double("L", 20.0);
    std::vector<std::vector<double>> rows;
    for (int n : {512, 1024, 2048}) {
        grid::GridSpec spec;
        spec.dim = 1;
        spec.half_width = L;
        spec.n = n;
        grid::GridField u = grid::sample(
            spec, [](const std::array<double, 3>& x) { return std::exp(-0.5 * x[0] * x[0]); });
        grid::GridField af = op::apply_fourier(u, m, s);
        grid::GridField as = op::apply_singular_integral(u, m, s);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            double dd = af.values[i] - as.values[i];
            num += dd * dd;
            den += af.values[i] * af.values[i];
        }
        rows.push_back({double(n), std::sqrt(num / den)});
    }
    io::write_csv(ctx.path("op_check.csv"), {"n", "rel_l2_error"}, rows);
    ctx.manifest("op-check");
    for (const auto& r : rows)
        if (!std::isfinite(r[1])) return 3;
    return 0;
}

int cmd_kernel(RunContext& ctx) {
    std::string kind = ctx.cfg.get_string("kind", "jump");
    int N = ctx.cfg.get_int("N", 1);
    double m = ctx.cfg.get_double("m", 1.0), s = ctx.cfg.get_double("s", 0.3);
    RadialKernelTable table;
    if (kind == "jump") {
        table = op::jump_kernel(N, s, m);
    } else if (kind == "bessel-potential") {
        table = kernels::bessel_potential_table(ctx.cfg.get_double("alpha", 0.6), N);
    } else if (kind == "poisson") {
        table = kernels::PoissonKernel(N, s, m).slice(ctx.cfg.get_double("y", 1.0));
    } else if (kind == "levy") {
        table = make_radial_table(
            [=](double r) { return kernels::levy_measure(r, m, s, N); }, 1e-4, 60.0 / m, 600);
    } else if (kind == "comparison") {
        kernels::ComparisonKernelSpec ck;
        ck.m = m;
        ck.s = s;
        ck.V1 = ctx.cfg.get_double("V1", 0.5);
        ck.delta = ctx.cfg.get_double("delta", 0.2);
        grid::GridSpec spec;
        spec.dim = 1;
        spec.half_width = ctx.cfg.get_double("L", 20.0);
        spec.n = ctx.cfg.get_int("n", 1024);
        table = kernels::build_comparison_kernel(ck, spec).table;
    } else {
        throw config::ConfigError("unknown kernel kind '" + kind + "'");
    }
    std::vector<std::vector<double>> rows;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < table.radii.size(); ++i) {
        rows.push_back({table.radii[i], table.values[i]});
        xs.push_back(table.radii[i]);
        ys.push_back(std::log(std::max(table.values[i], 1e-300)));
    }
    io::write_csv(ctx.path("kernel_" + kind + ".csv"), {"r", "value"}, rows);
    io::write_csv(ctx.path("kernel_" + kind + "_tail.csv"),
                  {"tail_rate", "tail_exponent", "tail_coefficient"},
                  {{table.large_r_law.rate, table.large_r_law.exponent,
                    table.large_r_law.coefficient}});
    io::write_svg_plot(ctx.path("kernel_" + kind + ".svg"), xs, ys, "log " + kind + " kernel");
    ctx.manifest("kernel");
    return 0;
}

int cmd_extend_check(RunContext& ctx) {
    double m = ctx.cfg.get_double("m", 1.0), s = ctx.cfg.get_double("s", 0.3);
    grid::GridSpec spec;
    spec.dim = 1;
    spec.half_width = ctx.cfg.get_double("L", 16.0);
    spec.n = ctx.cfg.get_int("n", 256);
    grid::GridField u = grid::sample(
        spec, [](const std::array<double, 3>& x) { return std::exp(-0.5 * x[0] * x[0]); });
    double sigma = specfun::operator_constants(1, s, m).sigma_s;
    std::vector<std::vector<double>> rows;
    for (int M : {128, 256}) {
        ext::GradedMesh mesh = ext::default_mesh(m, s, M);
        for (int route = 0; route < 2; ++route) {
            ext::ExtensionField U = route == 0 ? ext::extend_spectral(u, m, s, mesh)
                                               : ext::extend_ode(u, m, s, mesh);
            grid::GridField lhs = ext::trace_derivative(U);
            grid::GridField rhs = op::apply_fourier(u, m, s);
            grid::scale(rhs, sigma);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < u.values.size(); ++i) {
                double dd = lhs.values[i] - rhs.values[i];
                num += dd * dd;
                den += rhs.values[i] * rhs.values[i];
            }
            double xs2 = ext::xs_norm(U);
            xs2 *= xs2;
            double energy_err = std::abs(xs2 / (sigma * op::hs_norm_sq(u, m, s)) - 1.0);
            rows.push_back({double(M), double(route), std::sqrt(num / den), energy_err});
        }
    }
    io::write_csv(ctx.path("extend_check.csv"),
                  {"mesh_count", "route_ode", "trace_rel_l2", "energy_rel_err"}, rows);
    ctx.manifest("extend-check");
    for (const auto& r : rows)
        if (!std::isfinite(r[2]) || !std::isfinite(r[3])) return 3;
    return 0;
}

int cmd_ground_state(RunContext& ctx) {
    double m = ctx.cfg.get_double("m", 1.0), s = ctx.cfg.get_double("s", 0.3);
    double mu = ctx.cfg.get_double("mu", -0.5);
    grid::GridSpec spec = grid_from(ctx.cfg);
    var::SolverConfig sc = solver_from(ctx.cfg);
    var::SolveResult res = var::ground_state(mu, nonlinearity_from(ctx.cfg), m, s, spec, sc);

    io::write_field(ctx.path("ground_state.rfgf"), res.point.u);
    std::size_t best = 0;
    for (std::size_t i = 1; i < res.point.u.values.size(); ++i)
        if (res.point.u.values[i] > res.point.u.values[best]) best = i;
    var::DecayFit fit =
        var::decay_fit(res.point.u, res.point.u.coords(best), 4.0, 0.6 * spec.half_width);
    io::write_csv(ctx.path("ground_state.csv"),
                  {"mu", "energy", "residual", "iterations", "decay_rate", "decay_r2_exp",
                   "decay_r2_pow"},
                  {{mu, res.point.energy, res.point.residual, double(res.iterations), fit.c,
                    fit.r2_exp, fit.r2_pow}});
    std::vector<double> xs, ys;
    for (int i = 0; i < spec.n; ++i) {
        xs.push_back(spec.coord(i));
        ys.push_back(res.point.u.values[static_cast<std::size_t>(i)]);
    }
    io::write_svg_plot(ctx.path("ground_state.svg"), xs, ys, "ground state profile");
    ctx.manifest("ground-state");
    if (!res.converged) {
        std::vector<std::vector<double>> hist;
        for (std::size_t i = 0; i < res.residual_history.size(); ++i)
            hist.push_back({double(i), res.residual_history[i]});
        io::write_csv(ctx.path("residual_history.csv"), {"iteration", "residual"}, hist);
        std::cerr << "ground-state: no convergence, residual " << res.point.residual << "\n";
        return 3;
    }
    return 0;
}

int cmd_sweep(RunContext& ctx) {
    double m = ctx.cfg.get_double("m", 1.0), s = ctx.cfg.get_double("s", 0.3);
    var::PotentialSpec pot = potential_from(ctx.cfg);
    var::Nonlinearity nl = nonlinearity_from(ctx.cfg);
    var::GridPolicy policy;
    policy.c_hat = ctx.cfg.get_double("c_hat", 0.9);
    std::vector<double> eps_list = ctx.cfg.has("eps_list")
                                       ? ctx.cfg.get_double_list("eps_list")
                                       : std::vector<double>{0.5, 0.35, 0.25, 0.18};
    var::SweepReport rep =
        var::epsilon_sweep(pot, nl, m, s, policy, eps_list, false, solver_from(ctx.cfg));

    std::vector<std::vector<double>> rows;
    std::vector<double> xs, ys;
    bool any_failed = false;
    for (const auto& rec : rep.records) {
        if (!rec.solved) {
            any_failed = true;
            std::cerr << "sweep: eps = " << rec.eps << " failed: " << rec.error << "\n";
            continue;
        }
        rows.push_back({rec.eps, rec.argmax[0], rec.V_at_eps_argmax, rec.c_eps,
                        rec.sup_outside_lambda, rec.penalization_consistent ? 1.0 : 0.0,
                        rec.decay.C, rec.decay.c, rec.decay.r2_exp, rec.decay.r2_pow, rec.linf,
                        rec.dist_to_well});
        xs.push_back(rec.eps);
        ys.push_back(rec.c_eps);
    }
    io::write_csv(ctx.path("sweep.csv"),
                  {"eps", "argmax_x", "V_at_eps_argmax", "c_eps", "sup_outside_lambda",
                   "penalization_consistent", "decay_C", "decay_c", "decay_r2_exp",
                   "decay_r2_pow", "linf", "dist_to_well"},
                  rows);
    if (xs.size() >= 2) io::write_svg_plot(ctx.path("sweep_energy.svg"), xs, ys, "c_eps vs eps");
    ctx.manifest("sweep");
    return any_failed ? 3 : 0;
}

int cmd_barycenter_check(RunContext& ctx) {
    double m = ctx.cfg.get_double("m", 1.0), s = ctx.cfg.get_double("s", 0.3);
    double delta = ctx.cfg.get_double("delta_cutoff", 1.0);
    double rho = ctx.cfg.get_double("rho", 2.0);
    var::PotentialSpec pot = potential_from(ctx.cfg);
    var::Nonlinearity nl = nonlinearity_from(ctx.cfg);
    var::PenalizationParams pen = var::PenalizationParams::make(pot, nl, m, s, false);
    var::GridPolicy policy;
    policy.c_hat = ctx.cfg.get_double("c_hat", 0.9);
    std::vector<double> eps_list = ctx.cfg.has("eps_list")
                                       ? ctx.cfg.get_double_list("eps_list")
                                       : std::vector<double>{0.5, 0.35, 0.25, 0.18};
    std::vector<double> zs =
        ctx.cfg.has("z_list") ? ctx.cfg.get_double_list("z_list") : std::vector<double>{0.0};

    std::vector<std::vector<double>> rows;
    for (double eps : eps_list) {
        grid::GridSpec spec = var::sweep_grid(policy, pot, eps, 1);
        var::SolveResult gs =
            var::ground_state(pot.V({0, 0, 0}), nl, m, s, spec, solver_from(ctx.cfg));
        if (!gs.converged) return 3;
        var::PenalizedEnergy model(eps, pot, pen, nl, m, s);
        for (double z : zs) {
            var::NehariPoint phi = var::make_phi({z, 0, 0}, eps, model, gs.point.u, delta);
            auto b = var::barycenter(phi.u, eps, rho);
            rows.push_back({eps, z, phi.energy, gs.point.energy, phi.t_u, b[0]});
        }
    }
    io::write_csv(ctx.path("barycenter_check.csv"),
                  {"eps", "z", "J_phi", "d_mu", "t_eps", "barycenter"}, rows);
    ctx.manifest("barycenter-check");
    return 0;
}

int cmd_check_suite(RunContext& ctx) {
    std::vector<checks::CheckResult> results = checks::run_all_checks();
    std::vector<std::vector<double>> rows;
    bool all = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        all = all && r.passed;
        std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  (" << r.seconds
                  << " s)\n      " << r.detail << "\n";
        rows.push_back({double(i + 1), r.passed ? 1.0 : 0.0, r.seconds});
    }
    io::write_csv(ctx.path("check_suite.csv"), {"criterion", "passed", "seconds"}, rows);
    ctx.manifest("check-suite");
    std::cout << (all ? "ALL CHECKS PASSED" : "SOME CHECKS FAILED") << "\n";
    return all ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: relfrac <command> [--config <file>] [--key value ...]\n";
        return 2;
    }
    std::string command = argv[1];
    try {
        RunContext ctx;
        std::vector<std::string> args(argv + 2, argv + argc);
        // --config is consumed first; remaining flags override file values
        std::vector<std::string> overrides;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config") {
                if (i + 1 >= args.size())
                    throw config::ConfigError("flag '--config' has no value");
                ctx.cfg = config::parse_config_file(args[++i]);
            } else {
                overrides.push_back(args[i]);
            }
        }
        config::apply_overrides(ctx.cfg, overrides);
        config::validate_physics(ctx.cfg);

        const char* env_out = std::getenv("RELFRAC_OUT");
        ctx.out_dir = ctx.cfg.get_string("out", env_out ? env_out : ".");
        std::filesystem::create_directories(ctx.out_dir);

        if (command == "op-check") return cmd_op_check(ctx);
        if (command == "kernel") return cmd_kernel(ctx);
        if (command == "extend-check") return cmd_extend_check(ctx);
        if (command == "ground-state") return cmd_ground_state(ctx);
        if (command == "sweep") return cmd_sweep(ctx);
        if (command == "barycenter-check") return cmd_barycenter_check(ctx);
        if (command == "check-suite") return cmd_check_suite(ctx);
        std::cerr << "unknown command '" << command << "'\n";
        return 2;
    } catch (const relfrac::config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
