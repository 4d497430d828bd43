#include "relfrac/operator.hpp"

#include "relfrac/specfun.hpp"

#include <cmath>

namespace relfrac::op {

using specfun::bessel_k;
using specfun::gamma_fn;
using specfun::operator_constants;

RadialKernelTable jump_kernel(int N, double s, double m) {
    auto c = operator_constants(N, s, m);
    double nu = (N + 2.0 * s) / 2.0;
    double pref = c.c_ns * std::pow(m, nu);
    auto fn = [pref, nu, m](double r) { return pref * std::pow(r, -nu) * bessel_k(nu, m * r); };
    PowerLaw small;
    small.exponent = -(N + 2.0 * s);
    small.coefficient = c.c_ns * gamma_fn(nu) * std::pow(2.0, nu - 1.0);
    small.valid = true;
    ExpLaw tail;
    tail.rate = m;
    tail.exponent = -(N + 2.0 * s + 1.0) / 2.0;
    tail.coefficient = pref * std::sqrt(M_PI / (2.0 * m));
    tail.valid = true;
    return make_radial_table(fn, 1e-5, 200.0 / m, 1000, small, tail);
}

grid::GridField apply_fourier(const grid::GridField& u, double m, double s) {
    return grid::apply_radial_multiplier(
        u, [m, s](double k2) { return std::pow(k2 + m * m, s); });
}

grid::GridField apply_singular_integral(const grid::GridField& u, double m, double s,
                                        SingularQuadratureConfig& cfg) {
    const grid::GridSpec& spec = u.spec;
    spec.validate();
    const double h = spec.spacing();
    const double L = spec.half_width;
    const int N = spec.dim;
    const double m2s = std::pow(m * m, s);

    RadialKernelTable J = jump_kernel(N, s, m);

    double inner = cfg.inner_cut > 0.0 ? cfg.inner_cut : 0.5 * h;
    if (inner < 0.5 * h) inner = 0.5 * h;
    double outer = cfg.outer_cut;
    if (outer <= 0.0) {
        // Watson2 tail radius: largest r with the kernel tail above 1e-14
        outer = 10.0 / m;
        while (J.large_r_value(outer) * std::pow(outer, N - 1.0) > 1e-14 && outer < 1e4 / m)
            outer *= 1.25;
    }
    cfg.truncated = outer > L;
    if (outer > L) outer = L;
    cfg.inner_cut = inner;
    cfg.outer_cut = outer;

    // Weights W(y) = h^N J(|y|) on grid shifts (midpoint-of-product rule:
    // the integrand J(y) * second-difference is mild even where J blows up).
    // Near the singularity the quadratic part of the second difference is
    // captured exactly through second moments: each near cell contributes
    // its exact int_cell J |y|^2 minus the midpoint value to the Taylor
    // core, and shifts inside the inner cut contribute their full moment.
    // By the square symmetry of the cell unions, the anisotropic parts of
    // y^T D^2u y cancel, so the |y|^2 moment correction is exact on the
    // quadratic model.
    const double near_radius = 8.0 * h;
    auto cell_second_moment = [&](const std::array<double, 3>& y) {
        const int nn = 8; // 9 Simpson nodes per axis
        double acc = 0.0, wacc = 0.0;
        int total = 1;
        for (int a = 0; a < N; ++a) total *= nn + 1;
        for (int t = 0; t < total; ++t) {
            int rest = t;
            double r2 = 0.0, wgt = 1.0;
            for (int a = 0; a < N; ++a) {
                int sub = rest % (nn + 1);
                rest /= (nn + 1);
                double ya = y[a] - 0.5 * h + h * sub / nn;
                r2 += ya * ya;
                wgt *= (sub == 0 || sub == nn) ? 1.0 : (sub % 2 ? 4.0 : 2.0);
            }
            acc += wgt * J(std::sqrt(r2)) * r2;
            wacc += wgt;
        }
        return spec.cell_volume() * acc / wacc;
    };

    grid::GridField W(spec);
    const double cell = spec.cell_volume();
    double core_moment = 0.0; // second-moment corrections feeding the Taylor core
    for (std::size_t idx = 0; idx < W.values.size(); ++idx) {
        auto ix = W.unflatten(idx);
        double r2 = 0.0;
        std::array<double, 3> y{0.0, 0.0, 0.0};
        for (int d = 0; d < N; ++d) {
            int f = ix[d] <= spec.n / 2 ? ix[d] : ix[d] - spec.n;
            y[d] = f * h;
            r2 += y[d] * y[d];
        }
        double r = std::sqrt(r2);
        if (r == 0.0 || r > outer) {
            W.values[idx] = 0.0;
        } else if (r < inner) {
            W.values[idx] = 0.0;
            core_moment += cell_second_moment(y);
        } else {
            W.values[idx] = cell * J(r);
            if (r < near_radius) core_moment += cell_second_moment(y) - cell * J(r) * r2;
        }
    }

    // Sum over shifts via circular convolution: for symmetric W,
    // (W * u)(x) = 1/2 sum_y W(y) (u(x+y) + u(x-y)).
    double wsum = 0.0;
    for (double w : W.values) wsum += w;

    grid::SpectrumField su = grid::transform(u);
    grid::SpectrumField sw = grid::transform(W);
    double nfac = static_cast<double>(spec.size());
    for (std::size_t i = 0; i < su.coeff.size(); ++i) su.coeff[i] *= sw.coeff[i] * nfac;
    grid::GridField conv = grid::inverse_transform(su);

    grid::GridField out(spec);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = m2s * u.values[i] + (wsum * u.values[i] - conv.values[i]);

    if (cfg.taylor_core) {
        // Dropped-region model: 2u(x)-u(x+y)-u(x-y) ~ -y^T D^2u y, whose
        // angular average is -(|y|^2/N) Lap u, so the dropped shifts
        // contribute -(Lap u / 2N) S with S = int |y|^2 J(|y|) dy over the
        // origin cell plus the second moments of any other dropped cells.
        const double omega = N == 1 ? 2.0 : (N == 2 ? 2.0 * M_PI : 4.0 * M_PI);
        const double beta = J.small_r_law.exponent;
        const double C = J.small_r_law.coefficient;
        const double rb = 0.5 * h; // inscribed ball radius of the origin cell

        // ball part of the cell: small-r law analytic, deviation by Simpson
        double S = omega * C * std::pow(rb, beta + N + 2.0) / (beta + N + 2.0);
        {
            const int nn = 64;
            double lo = rb * 1e-6, span = rb - lo, acc = 0.0;
            for (int i = 0; i <= nn; ++i) {
                double r = lo + span * i / nn;
                double f = (J(r) - C * std::pow(r, beta)) * std::pow(r, N + 1.0);
                acc += f * ((i == 0 || i == nn) ? 1.0 : (i % 2 ? 4.0 : 2.0));
            }
            S += omega * acc * span / nn / 3.0;
        }
        if (N == 2) {
            // square-cell corners outside the inscribed disc, exact in polar
            const int nn = 64;
            double acc = 0.0;
            for (int i = 0; i <= nn; ++i) {
                double phi = (M_PI / 4.0) * i / nn;
                double rout = rb / std::cos(phi);
                const int mm = 16;
                double rad = 0.0;
                for (int j = 0; j <= mm; ++j) {
                    double r = rb + (rout - rb) * j / mm;
                    rad += J(r) * r * r * r *
                           ((j == 0 || j == mm) ? 1.0 : (j % 2 ? 4.0 : 2.0));
                }
                rad *= (rout - rb) / mm / 3.0;
                acc += rad * ((i == 0 || i == nn) ? 1.0 : (i % 2 ? 4.0 : 2.0));
            }
            S += 8.0 * acc * (M_PI / 4.0) / nn / 3.0;
        } else if (N == 3) {
            // cube corners: midpoint grid with an indicator, coarse but small
            const int nn = 24;
            double acc = 0.0;
            for (int a = 0; a < nn; ++a)
                for (int b = 0; b < nn; ++b)
                    for (int c3 = 0; c3 < nn; ++c3) {
                        double x = -rb + h * (a + 0.5) / nn;
                        double yy = -rb + h * (b + 0.5) / nn;
                        double z = -rb + h * (c3 + 0.5) / nn;
                        double r = std::sqrt(x * x + yy * yy + z * z);
                        if (r > rb) acc += J(r) * r * r;
                    }
            S += acc * std::pow(h / nn, 3.0);
        }
        S += core_moment; // dropped cells beyond the origin, if inner > h/2

        grid::GridField lap =
            grid::apply_radial_multiplier(u, [](double k2) { return -k2; });
        for (std::size_t i = 0; i < out.values.size(); ++i)
            out.values[i] -= S / (2.0 * N) * lap.values[i];
    }
    return out;
}

grid::GridField apply_singular_integral(const grid::GridField& u, double m, double s) {
    SingularQuadratureConfig cfg;
    return apply_singular_integral(u, m, s, cfg);
}

double hs_norm_sq(const grid::GridField& u, double m, double s) {
    grid::SpectrumField sf = grid::transform(u);
    const grid::GridSpec& spec = u.spec;
    const int n = spec.n;
    double acc = 0.0;
    for (std::size_t idx = 0; idx < sf.coeff.size(); ++idx) {
        std::size_t rest = idx;
        double k2 = 0.0;
        for (int d = spec.dim - 1; d >= 0; --d) {
            int j = static_cast<int>(rest % n);
            rest /= n;
            double k = spec.freq(j);
            k2 += k * k;
        }
        acc += std::pow(k2 + m * m, s) * std::norm(sf.coeff[idx]);
    }
    return acc * spec.box_volume();
}

double hs_norm(const grid::GridField& u, double m, double s) {
    return std::sqrt(hs_norm_sq(u, m, s));
}

} // namespace relfrac::op
