#include "relfrac/extension.hpp"

#include "relfrac/specfun.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace relfrac::ext {

void GradedMesh::validate() const {
    if (!(height > 0.0)) throw std::invalid_argument("GradedMesh: height must be positive");
    if (count < 8) throw std::invalid_argument("GradedMesh: too few nodes");
    if (exponent < 1.0) throw std::invalid_argument("GradedMesh: grading exponent must be >= 1");
}

GradedMesh default_mesh(double m, double s, int count) {
    GradedMesh mesh;
    mesh.height = 10.0 / m; // profile tail e^{-m Y} below 5e-5 at the slowest mode
    mesh.count = count;
    mesh.exponent = std::max(2.0, 1.0 / s);
    return mesh;
}

namespace {

// Frequency magnitudes squared per spectral index.
std::vector<double> k2_per_index(const grid::GridSpec& spec) {
    std::vector<double> k2(spec.size());
    const int n = spec.n;
    for (std::size_t idx = 0; idx < k2.size(); ++idx) {
        std::size_t rest = idx;
        double acc = 0.0;
        for (int d = spec.dim - 1; d >= 0; --d) {
            int j = static_cast<int>(rest % n);
            rest /= n;
            double k = spec.freq(j);
            acc += k * k;
        }
        k2[idx] = acc;
    }
    return k2;
}

template <typename Profile>
ExtensionField extend_with_profile(const grid::GridField& u, double m, double s,
                                   const GradedMesh& mesh, Profile&& profile_for_omega) {
    mesh.validate();
    u.spec.validate();
    ExtensionField U;
    U.base = u.spec;
    U.mesh = mesh;
    U.s = s;
    U.m = m;

    grid::SpectrumField su = grid::transform(u);
    std::vector<double> k2 = k2_per_index(u.spec);

    // profiles cached per distinct frequency magnitude
    std::map<double, std::vector<double>> cache;
    auto profile_at = [&](double kk2) -> const std::vector<double>& {
        auto it = cache.find(kk2);
        if (it == cache.end()) {
            double omega = std::sqrt(kk2 + m * m);
            it = cache.emplace(kk2, profile_for_omega(omega)).first;
        }
        return it->second;
    };

    U.slices.reserve(mesh.count + 1);
    U.slices.push_back(u); // exact boundary slice
    for (int j = 1; j <= mesh.count; ++j) {
        grid::SpectrumField sj;
        sj.spec = u.spec;
        sj.coeff.resize(su.coeff.size());
        for (std::size_t idx = 0; idx < su.coeff.size(); ++idx)
            sj.coeff[idx] = su.coeff[idx] * profile_at(k2[idx])[j];
        U.slices.push_back(grid::inverse_transform(sj));
    }
    return U;
}

} // namespace

ExtensionField extend_spectral(const grid::GridField& u, double m, double s,
                               const GradedMesh& mesh) {
    return extend_with_profile(u, m, s, mesh, [&](double omega) {
        std::vector<double> prof(mesh.count + 1);
        for (int j = 0; j <= mesh.count; ++j)
            prof[j] = specfun::theta_profile(s, mesh.node(j) * omega);
        return prof;
    });
}

std::vector<double> solve_profile_ode(double omega, double s, const GradedMesh& mesh) {
    mesh.validate();
    const int M = mesh.count;
    // transmissibility of interval (y_{j-1}, y_j): 2s / (y_j^{2s} - y_{j-1}^{2s})
    std::vector<double> G(M + 1, 0.0);
    for (int j = 1; j <= M; ++j) {
        double a = std::pow(mesh.node(j - 1), 2.0 * s);
        double b = std::pow(mesh.node(j), 2.0 * s);
        G[j] = 2.0 * s / (b - a);
    }
    // control-volume weight int y^{1-2s} dy over [y_{j-1/2}, y_{j+1/2}]
    auto wint = [&](double lo, double hi) {
        double e = 2.0 - 2.0 * s;
        return (std::pow(hi, e) - std::pow(lo, e)) / e;
    };
    // Thomas solve of the tridiagonal system for W_1..W_{M-1},
    // W_0 = 1, W_M = 0.
    std::vector<double> diag(M, 0.0), lower(M, 0.0), upper(M, 0.0), rhs(M, 0.0);
    for (int j = 1; j < M; ++j) {
        double ymid_lo = 0.5 * (mesh.node(j - 1) + mesh.node(j));
        double ymid_hi = 0.5 * (mesh.node(j) + mesh.node(j + 1));
        double V = wint(ymid_lo, ymid_hi);
        diag[j] = -(G[j] + G[j + 1] + omega * omega * V);
        lower[j] = G[j];
        upper[j] = G[j + 1];
    }
    rhs[1] = -G[1] * 1.0;
    for (int j = 2; j < M; ++j) {
        double f = lower[j] / diag[j - 1];
        diag[j] -= f * upper[j - 1];
        rhs[j] -= f * rhs[j - 1];
        if (!std::isfinite(diag[j]) || diag[j] == 0.0)
            throw std::runtime_error("solve_profile_ode: singular tridiagonal solve");
    }
    std::vector<double> W(M + 1, 0.0);
    W[0] = 1.0;
    W[M] = 0.0;
    W[M - 1] = rhs[M - 1] / diag[M - 1];
    for (int j = M - 2; j >= 1; --j) W[j] = (rhs[j] - upper[j] * W[j + 1]) / diag[j];
    return W;
}

ExtensionField extend_ode(const grid::GridField& u, double m, double s, const GradedMesh& mesh) {
    if (mesh.count < 64) throw std::invalid_argument("extend_ode: mesh too coarse (need M >= 64)");
    return extend_with_profile(u, m, s, mesh,
                               [&](double omega) { return solve_profile_ode(omega, s, mesh); });
}

grid::GridField trace_derivative(const ExtensionField& U) {
    const GradedMesh& mesh = U.mesh;
    const double s = U.s;
    const int fit_nodes = 6;
    if (mesh.count < fit_nodes + 1)
        throw std::invalid_argument("trace_derivative: mesh too coarse for the layer fit");
    // two-parameter least squares U(y) ~ c0 + A y^{2s} on the smallest
    // positive nodes; the weighted derivative limit is -2s A
    double s11 = fit_nodes, s12 = 0.0, s22 = 0.0;
    std::vector<double> phi(fit_nodes);
    for (int i = 0; i < fit_nodes; ++i) {
        phi[i] = std::pow(mesh.node(i + 1), 2.0 * s);
        s12 += phi[i];
        s22 += phi[i] * phi[i];
    }
    double det = s11 * s22 - s12 * s12;
    if (!(std::abs(det) > 1e-30))
        throw std::runtime_error("trace_derivative: singular layer fit");

    grid::GridField out(U.base);
    for (std::size_t p = 0; p < out.values.size(); ++p) {
        double b1 = 0.0, b2 = 0.0;
        for (int i = 0; i < fit_nodes; ++i) {
            double v = U.slices[i + 1].values[p];
            b1 += v;
            b2 += v * phi[i];
        }
        double A = (s11 * b2 - s12 * b1) / det;
        out.values[p] = -2.0 * s * A;
    }
    return out;
}

double xs_norm(const ExtensionField& U) {
    const GradedMesh& mesh = U.mesh;
    const grid::GridSpec& spec = U.base;
    const double s = U.s;
    const double m = U.m;
    std::vector<double> k2 = k2_per_index(spec);

    std::vector<grid::SpectrumField> spectra;
    spectra.reserve(U.slices.size());
    for (const auto& slice : U.slices) spectra.push_back(grid::transform(slice));

    auto wint = [&](double lo, double hi) {
        double e = 2.0 - 2.0 * s;
        return (std::pow(hi, e) - std::pow(lo, e)) / e;
    };

    double acc = 0.0;
    for (int j = 0; j < mesh.count; ++j) {
        double y0 = mesh.node(j), y1 = mesh.node(j + 1);
        double dy = y1 - y0;
        double w = wint(y0, y1);
        const auto& c0 = spectra[j].coeff;
        const auto& c1 = spectra[j + 1].coeff;
        for (std::size_t idx = 0; idx < c0.size(); ++idx) {
            double dnorm = std::norm((c1[idx] - c0[idx]) / dy);
            auto mid = 0.5 * (c0[idx] + c1[idx]);
            acc += w * (dnorm + (k2[idx] + m * m) * std::norm(mid));
        }
    }
    return std::sqrt(acc * spec.box_volume());
}

} // namespace relfrac::ext
