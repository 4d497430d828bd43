#include "relfrac/kernels.hpp"

#include "relfrac/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relfrac {

double RadialKernelTable::small_r_value(double r) const {
    return small_r_law.coefficient * std::pow(r, small_r_law.exponent);
}

double RadialKernelTable::large_r_value(double r) const {
    return large_r_law.coefficient * std::pow(r, large_r_law.exponent) *
           std::exp(-large_r_law.rate * r);
}

double RadialKernelTable::operator()(double r) const {
    if (eval_fn) return eval_fn(r);
    if (radii.empty()) throw std::runtime_error("RadialKernelTable: empty table");
    if (r <= radii.front()) {
        if (small_r_law.valid) return small_r_value(r);
        return values.front();
    }
    if (r >= radii.back()) {
        if (large_r_law.valid) return large_r_value(r);
        return values.back();
    }
    auto it = std::lower_bound(radii.begin(), radii.end(), r);
    std::size_t i = static_cast<std::size_t>(it - radii.begin());
    double r0 = radii[i - 1], r1 = radii[i];
    double v0 = values[i - 1], v1 = values[i];
    if (v0 > 0.0 && v1 > 0.0) { // log-linear in value, linear in radius
        double t = (r - r0) / (r1 - r0);
        return std::exp((1.0 - t) * std::log(v0) + t * std::log(v1));
    }
    double t = (r - r0) / (r1 - r0);
    return (1.0 - t) * v0 + t * v1;
}

RadialKernelTable make_radial_table(std::function<double(double)> fn, double r_min,
                                    double r_max, int count, PowerLaw small_law,
                                    ExpLaw large_law) {
    RadialKernelTable t;
    t.small_r_law = small_law;
    t.large_r_law = large_law;
    t.radii.resize(count);
    t.values.resize(count);
    double lr0 = std::log(r_min), lr1 = std::log(r_max);
    for (int i = 0; i < count; ++i) {
        double r = std::exp(lr0 + (lr1 - lr0) * i / (count - 1));
        t.radii[i] = r;
        t.values[i] = fn(r);
    }
    t.eval_fn = std::move(fn);
    return t;
}

} // namespace relfrac

namespace relfrac::kernels {

using specfun::bessel_k;
using specfun::gamma_fn;
using specfun::theta_profile;

double sphere_measure(int N) {
    switch (N) {
        case 1: return 2.0;
        case 2: return 2.0 * M_PI;
        case 3: return 4.0 * M_PI;
        default: throw std::invalid_argument("sphere_measure: N must be 1, 2 or 3");
    }
}

PoissonKernel::PoissonKernel(int N, double s, double m)
    : N_(N), s_(s), m_(m), nu_((N + 2.0 * s) / 2.0), cprime_(1.0) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("PoissonKernel: s outside (0,1)");
    if (!(m > 0.0)) throw std::invalid_argument("PoissonKernel: m must be positive");
    // Single-point calibration at reference height y = 1: the x-integral
    // must equal theta(m y) there; other heights then act as predictions.
    cprime_ = theta_profile(s_, m_) / raw_integral(1.0);
}

double PoissonKernel::raw(double r, double y) const {
    double rho = std::sqrt(r * r + y * y);
    return std::pow(y, 2.0 * s_) * std::pow(m_, nu_) * std::pow(rho, -nu_) *
           bessel_k(nu_, m_ * rho);
}

double PoissonKernel::operator()(double r, double y) const {
    if (!(y > 0.0)) throw std::domain_error("PoissonKernel: height must be positive");
    return cprime_ * raw(r, y);
}

double PoissonKernel::raw_integral(double y) const {
    // omega_{N-1} int_0^R r^{N-1} P_raw(r, y) dr, composite Simpson with a
    // step resolving the peak scale min(y, 1/m).
    double step = std::min({y / 40.0, 0.02 / m_, 0.02});
    double R = y + 60.0 / m_;
    int n = static_cast<int>(std::ceil(R / step));
    if (n % 2 == 1) ++n;
    step = R / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
        double r = i * step;
        double f = std::pow(r, N_ - 1.0) * raw(r, y);
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        sum += w * f;
    }
    return sphere_measure(N_) * sum * step / 3.0;
}

double PoissonKernel::integral(double y) const {
    if (!(y > 0.0)) throw std::domain_error("PoissonKernel: height must be positive");
    return cprime_ * raw_integral(y);
}

RadialKernelTable PoissonKernel::slice(double y) const {
    double c = cprime_;
    double s = s_, m = m_, nu = nu_;
    auto fn = [c, s, m, nu, y](double r) {
        double rho = std::sqrt(r * r + y * y);
        return c * std::pow(y, 2.0 * s) * std::pow(m, nu) * std::pow(rho, -nu) *
               bessel_k(nu, m * rho);
    };
    ExpLaw tail;
    tail.rate = m;
    tail.exponent = -(N_ + 2.0 * s_ + 1.0) / 2.0;
    tail.coefficient = c * std::pow(y, 2.0 * s) * std::pow(m, nu) * std::sqrt(M_PI / (2.0 * m));
    tail.valid = true;
    return make_radial_table(fn, 1e-4, 100.0 / m_, 800, {}, tail);
}

double bessel_potential_kernel(double alpha, double r, int N) {
    if (!(alpha > 0.0)) throw std::domain_error("bessel_potential_kernel: alpha must be positive");
    if (!(r > 0.0)) throw std::domain_error("bessel_potential_kernel: r must be positive");
    double nu = (N - alpha) / 2.0;
    double pref = 1.0 / (std::pow(2.0, (N + alpha - 2.0) / 2.0) * std::pow(M_PI, N / 2.0) *
                         gamma_fn(alpha / 2.0));
    return pref * bessel_k(std::abs(nu), r) * std::pow(r, (alpha - N) / 2.0);
}

PowerLaw bessel_potential_small_law(double alpha, int N) {
    PowerLaw law;
    if (!(alpha > 0.0 && alpha < N)) return law;
    law.exponent = alpha - N;
    law.coefficient = gamma_fn((N - alpha) / 2.0) /
                      (std::pow(2.0, alpha) * std::pow(M_PI, N / 2.0) * gamma_fn(alpha / 2.0));
    law.valid = true;
    return law;
}

RadialKernelTable bessel_potential_table(double alpha, int N) {
    ExpLaw tail;
    tail.rate = 1.0;
    tail.exponent = (alpha - N - 1.0) / 2.0;
    tail.coefficient = 1.0 / (std::pow(2.0, (N + alpha - 1.0) / 2.0) *
                              std::pow(M_PI, (N - 1.0) / 2.0) * gamma_fn(alpha / 2.0));
    tail.valid = true;
    auto fn = [alpha, N](double r) { return bessel_potential_kernel(alpha, r, N); };
    return make_radial_table(fn, 1e-4, 60.0, 800, bessel_potential_small_law(alpha, N), tail);
}

grid::GridField relativistic_density(const grid::GridSpec& spec, double t, double m, double s) {
    spec.validate();
    if (!(t > 0.0)) throw std::domain_error("relativistic_density: t must be positive");
    double m2s = std::pow(m * m, s);
    double kmax2 = 0.0;
    double knyq = M_PI / spec.half_width * (spec.n / 2);
    kmax2 = spec.dim * knyq * knyq;
    double chi_nyq = std::exp(-t * (std::pow(kmax2 + m * m, s) - m2s));
    if (chi_nyq > 0.5)
        throw std::runtime_error("relativistic_density: density unresolved at grid spacing");
    grid::SpectrumField sf;
    sf.spec = spec;
    sf.coeff.resize(spec.size());
    double inv_box = 1.0 / spec.box_volume();
    const int n = spec.n;
    for (std::size_t idx = 0; idx < sf.coeff.size(); ++idx) {
        std::size_t rest = idx;
        double k2 = 0.0;
        for (int d = spec.dim - 1; d >= 0; --d) {
            int j = static_cast<int>(rest % n);
            rest /= n;
            double k = spec.freq(j);
            k2 += k * k;
        }
        double chi = std::exp(-t * (std::pow(k2 + m * m, s) - m2s));
        sf.coeff[idx] = chi * inv_box;
    }
    return grid::inverse_transform(sf);
}

double relativistic_density_half(double r, double t, double m, int N) {
    double rho = std::sqrt(r * r + t * t);
    return 2.0 * std::pow(m / (2.0 * M_PI), (N + 1.0) / 2.0) * t * std::exp(m * t) *
           std::pow(rho * rho, -(N + 1.0) / 4.0) * bessel_k((N + 1.0) / 2.0, m * rho);
}

double gaussian_heat(double r, double t, int N) {
    return std::pow(4.0 * M_PI * t, -N / 2.0) * std::exp(-r * r / (4.0 * t));
}

double levy_measure(double r, double m, double s, int N) {
    if (!(r > 0.0)) throw std::domain_error("levy_measure: r must be positive");
    double nu = (N + 2.0 * s) / 2.0;
    double pref = 2.0 * s * std::pow(2.0, (2.0 * s - N) / 2.0) /
                  (std::pow(M_PI, N / 2.0) * gamma_fn(1.0 - s));
    return pref * std::pow(m / r, nu) * bessel_k(nu, m * r);
}

double ComparisonKernelSpec::gamma() const { return std::pow(m * m, s) - (V1 + delta); }

void ComparisonKernelSpec::validate() const {
    if (!(gamma() > 0.0))
        throw std::invalid_argument("ComparisonKernelSpec: V1 + delta >= m^{2s}");
}

namespace {

// Log-spaced trapezoid nodes/weights for int_{t0}^{T} f(t) dt in log time.
struct LogTimeRule {
    std::vector<double> t, w;
};

LogTimeRule log_time_rule(double t0, double T, int nodes) {
    LogTimeRule r;
    r.t.resize(nodes);
    r.w.resize(nodes, 0.0);
    double l0 = std::log(t0), l1 = std::log(T);
    double dl = (l1 - l0) / (nodes - 1);
    for (int i = 0; i < nodes; ++i) r.t[i] = std::exp(l0 + dl * i);
    // int f dt = int f(t) t dlog t, composite trapezoid in log t
    for (int i = 0; i < nodes; ++i) {
        double wl = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
        r.w[i] = wl * dl * r.t[i];
    }
    return r;
}

} // namespace

ComparisonKernel build_comparison_kernel(const ComparisonKernelSpec& spec,
                                         const grid::GridSpec& gspec, int time_nodes) {
    spec.validate();
    gspec.validate();
    double gamma = spec.gamma();
    double T = std::log(1e12) / gamma;
    LogTimeRule rule = log_time_rule(1e-6, T, time_nodes);

    double m2s = std::pow(spec.m * spec.m, spec.s);
    grid::SpectrumField sf;
    sf.spec = gspec;
    sf.coeff.assign(gspec.size(), 0.0);
    double inv_box = 1.0 / gspec.box_volume();
    const int n = gspec.n;
    // Time quadrature of the density route assembled per frequency: each
    // time node contributes e^{-gamma t} times the density characteristic
    // function at that t.
    for (std::size_t idx = 0; idx < sf.coeff.size(); ++idx) {
        std::size_t rest = idx;
        double k2 = 0.0;
        for (int d = gspec.dim - 1; d >= 0; --d) {
            int j = static_cast<int>(rest % n);
            rest /= n;
            double k = gspec.freq(j);
            k2 += k * k;
        }
        double beta = std::pow(k2 + spec.m * spec.m, spec.s) - m2s;
        double acc = 0.0;
        for (int i = 0; i < time_nodes; ++i)
            acc += rule.w[i] * std::exp(-(gamma + beta) * rule.t[i]);
        sf.coeff[idx] = acc * inv_box;
    }

    ComparisonKernel out;
    out.spec = spec;
    out.field = grid::inverse_transform(sf);

    // Radial extraction: N = 1 takes the symmetrized positive-axis samples,
    // higher dimensions bin by min-image radius.
    RadialKernelTable table;
    if (gspec.dim == 1) {
        // index-frame field: the kernel is centered at index 0, radius i*h
        for (int i = 1; i < gspec.n / 2; ++i) {
            table.radii.push_back(i * gspec.spacing());
            table.values.push_back(0.5 * (out.field.values[i] +
                                          out.field.values[gspec.n - i]));
        }
    } else {
        int bins = gspec.n / 2;
        std::vector<double> acc(bins, 0.0);
        std::vector<int> cnt(bins, 0);
        double h = gspec.spacing();
        grid::GridField& f = out.field;
        for (std::size_t idx = 0; idx < f.values.size(); ++idx) {
            auto ix = f.unflatten(idx);
            double r2 = 0.0;
            for (int d = 0; d < gspec.dim; ++d) {
                int q = ix[d] <= gspec.n / 2 ? ix[d] : ix[d] - gspec.n;
                r2 += (q * h) * (q * h);
            }
            int b = static_cast<int>(std::sqrt(r2) / h);
            if (b >= 1 && b < bins) {
                acc[b] += f.values[idx];
                cnt[b] += 1;
            }
        }
        for (int b = 1; b < bins; ++b) {
            if (cnt[b] == 0) continue;
            table.radii.push_back(b * h);
            table.values.push_back(acc[b] / cnt[b]);
        }
    }
    out.table = table;
    return out;
}

double comparison_kernel_closed_half(const ComparisonKernelSpec& spec, double r, int N,
                                     int time_nodes) {
    spec.validate();
    if (std::abs(spec.s - 0.5) > 1e-12)
        throw std::invalid_argument("comparison_kernel_closed_half: requires s = 1/2");
    double gamma = spec.gamma();
    double T = std::log(1e12) / gamma;
    LogTimeRule rule = log_time_rule(1e-6, T, time_nodes);
    double acc = 0.0;
    for (int i = 0; i < time_nodes; ++i)
        acc += rule.w[i] * std::exp(-gamma * rule.t[i]) *
               relativistic_density_half(r, rule.t[i], spec.m, N);
    return acc;
}

} // namespace relfrac::kernels
