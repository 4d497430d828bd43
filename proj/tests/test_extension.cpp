#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relfrac/extension.hpp"
#include "relfrac/kernels.hpp"
#include "relfrac/operator.hpp"
#include "relfrac/specfun.hpp"

#include <cmath>

using namespace relfrac;

namespace {

grid::GridSpec spec1d(double L, int n) {
    grid::GridSpec s;
    s.dim = 1;
    s.half_width = L;
    s.n = n;
    return s;
}

double rel_l2(const grid::GridField& a, const grid::GridField& b) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        num += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        den += b.values[i] * b.values[i];
    }
    return std::sqrt(num / den);
}

grid::GridField gaussian(const grid::GridSpec& spec) {
    return grid::sample(spec, [](const std::array<double, 3>& x) {
        return std::exp(-0.5 * x[0] * x[0]);
    });
}

} // namespace

TEST_CASE("graded mesh validation") {
    ext::GradedMesh mesh;
    mesh.height = -1.0;
    CHECK_THROWS_AS(mesh.validate(), std::invalid_argument);
    mesh = ext::default_mesh(1.0, 0.3, 256);
    CHECK(mesh.node(0) == 0.0);
    CHECK(mesh.node(mesh.count) == doctest::Approx(mesh.height));
    for (int j = 1; j <= mesh.count; ++j) CHECK(mesh.node(j) > mesh.node(j - 1));
}

TEST_CASE("spectral extension of a constant follows theta") {
    double m = 1.0, s = 0.3, c = 1.8;
    grid::GridSpec spec = spec1d(8.0, 32);
    grid::GridField u(spec);
    for (auto& v : u.values) v = c;
    ext::GradedMesh mesh = ext::default_mesh(m, s, 128);
    ext::ExtensionField U = ext::extend_spectral(u, m, s, mesh);
    for (int j : {0, 20, 64, 128}) {
        double expect = c * specfun::theta_profile(s, m * mesh.node(j));
        for (double v : U.slices[static_cast<std::size_t>(j)].values)
            CHECK(v == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("spectral extension of a single mode") {
    double m = 1.0, s = 0.3;
    grid::GridSpec spec = spec1d(8.0, 64);
    double k0 = M_PI / spec.half_width * 3.0;
    grid::GridField u =
        grid::sample(spec, [&](const std::array<double, 3>& x) { return std::cos(k0 * x[0]); });
    ext::GradedMesh mesh = ext::default_mesh(m, s, 128);
    ext::ExtensionField U = ext::extend_spectral(u, m, s, mesh);
    double omega = std::sqrt(k0 * k0 + m * m);
    for (int j : {10, 64, 100}) {
        double prof = specfun::theta_profile(s, mesh.node(j) * omega);
        for (std::size_t i = 0; i < u.values.size(); ++i)
            CHECK(U.slices[static_cast<std::size_t>(j)].values[i] ==
                  doctest::Approx(prof * u.values[i]).epsilon(1e-10));
    }
}

TEST_CASE("extension slice matches the Poisson kernel convolution at y = 1") {
    double m = 1.0, s = 0.3;
    grid::GridSpec spec = spec1d(16.0, 512);
    grid::GridField u = gaussian(spec);
    ext::GradedMesh mesh;
    mesh.height = 10.0;
    mesh.count = 128;
    mesh.exponent = 1.0; // uniform: node(j) = 10 j / 128, j so that y = 1 is hit
    // pick the node closest to y = 1
    int jbest = 0;
    double best = 1e9;
    for (int j = 0; j <= mesh.count; ++j) {
        if (std::abs(mesh.node(j) - 1.0) < best) {
            best = std::abs(mesh.node(j) - 1.0);
            jbest = j;
        }
    }
    double y = mesh.node(jbest);
    ext::ExtensionField U = ext::extend_spectral(u, m, s, mesh);
    kernels::PoissonKernel P(1, s, m);
    grid::GridField conv = grid::convolve_radial(u, P.slice(y)).field;
    CHECK(rel_l2(U.slices[static_cast<std::size_t>(jbest)], conv) < 1e-3);
}

TEST_CASE("ode extension: zero datum, profile check, spectral agreement") {
    double m = 1.0, s = 0.3;
    ext::GradedMesh mesh = ext::default_mesh(m, s, 256);

    // scalar profile at omega = 1 matches theta
    std::vector<double> W = ext::solve_profile_ode(1.0, s, mesh);
    double worst = 0.0;
    for (int j = 0; j <= mesh.count; ++j) {
        double target = specfun::theta_profile(s, mesh.node(j));
        worst = std::max(worst, std::abs(W[static_cast<std::size_t>(j)] - target));
    }
    CHECK(worst < 1e-3);

    grid::GridSpec spec = spec1d(16.0, 128);
    grid::GridField zero(spec);
    ext::ExtensionField Uz = ext::extend_ode(zero, m, s, mesh);
    for (const auto& slice : Uz.slices)
        for (double v : slice.values) CHECK(v == 0.0);

    grid::GridField u = gaussian(spec);
    ext::ExtensionField Uo = ext::extend_ode(u, m, s, mesh);
    ext::ExtensionField Us = ext::extend_spectral(u, m, s, mesh);
    double num = 0, den = 0;
    for (std::size_t j = 0; j < Uo.slices.size(); ++j) {
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            double d = Uo.slices[j].values[i] - Us.slices[j].values[i];
            num += d * d;
            den += Us.slices[j].values[i] * Us.slices[j].values[i];
        }
    }
    CHECK(std::sqrt(num / den) < 1e-2);
}

TEST_CASE("ode/spectral discrepancy halves when the mesh doubles") {
    double m = 1.0, s = 0.3;
    grid::GridSpec spec = spec1d(16.0, 64);
    grid::GridField u = gaussian(spec);
    auto discrepancy = [&](int M) {
        ext::GradedMesh mesh = ext::default_mesh(m, s, M);
        ext::ExtensionField Uo = ext::extend_ode(u, m, s, mesh);
        ext::ExtensionField Us = ext::extend_spectral(u, m, s, mesh);
        double num = 0, den = 0;
        for (std::size_t j = 0; j < Uo.slices.size(); ++j)
            for (std::size_t i = 0; i < u.values.size(); ++i) {
                double d = Uo.slices[j].values[i] - Us.slices[j].values[i];
                num += d * d;
                den += Us.slices[j].values[i] * Us.slices[j].values[i];
            }
        return std::sqrt(num / den);
    };
    double e1 = discrepancy(128), e2 = discrepancy(256);
    CHECK(e2 < e1 / 2.0);
}

TEST_CASE("weighted trace derivative: scalar identity") {
    // -lim y^{1-2s} d/dy theta(r y) = sigma_s r^{2s}
    double s = 0.3;
    double sigma = specfun::operator_constants(1, s, 1.0).sigma_s;
    for (double r : {0.5, 1.0, 2.0}) {
        // reproduce the layer fit on theta itself
        ext::GradedMesh mesh = ext::default_mesh(1.0, s, 256);
        double s11 = 6, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
        for (int i = 1; i <= 6; ++i) {
            double phi = std::pow(mesh.node(i), 2 * s);
            double v = specfun::theta_profile(s, r * mesh.node(i));
            s12 += phi;
            s22 += phi * phi;
            b1 += v;
            b2 += v * phi;
        }
        double A = (s11 * b2 - s12 * b1) / (s11 * s22 - s12 * s12);
        CHECK(-2 * s * A == doctest::Approx(sigma * std::pow(r, 2 * s)).epsilon(1e-3));
    }
}

TEST_CASE("trace derivative equals sigma_s times the operator") {
    double m = 1.0, s = 0.3;
    double sigma = specfun::operator_constants(1, s, m).sigma_s;
    grid::GridSpec spec = spec1d(8.0, 64);
    ext::GradedMesh mesh = ext::default_mesh(m, s, 256);

    // single mode
    double k0 = M_PI / spec.half_width * 3.0;
    grid::GridField u =
        grid::sample(spec, [&](const std::array<double, 3>& x) { return std::cos(k0 * x[0]); });
    grid::GridField lhs = ext::trace_derivative(ext::extend_spectral(u, m, s, mesh));
    double lam = sigma * std::pow(k0 * k0 + m * m, s);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(lhs.values[i] == doctest::Approx(lam * u.values[i]).epsilon(1e-2));

    // constant
    grid::GridField c(spec);
    for (auto& v : c.values) v = 2.0;
    grid::GridField lc = ext::trace_derivative(ext::extend_spectral(c, m, s, mesh));
    for (double v : lc.values)
        CHECK(v == doctest::Approx(sigma * std::pow(m * m, s) * 2.0).epsilon(1e-2));
}

TEST_CASE("weighted energy: canonical equality, minimality, m-inequality") {
    double m = 1.0, s = 0.3;
    double sigma = specfun::operator_constants(1, s, m).sigma_s;
    grid::GridSpec spec = spec1d(16.0, 128);
    grid::GridField u = gaussian(spec);
    ext::GradedMesh mesh = ext::default_mesh(m, s, 256);
    ext::ExtensionField U = ext::extend_spectral(u, m, s, mesh);

    double xs2 = ext::xs_norm(U);
    xs2 *= xs2;
    double hs2 = op::hs_norm_sq(u, m, s);
    CHECK(xs2 == doctest::Approx(sigma * hs2).epsilon(1e-2));

    // m-inequality: sigma m^{2s} |u|_2^2 <= xs_norm^2
    CHECK(sigma * std::pow(m * m, s) * grid::inner(u, u) <= xs2 * (1 + 1e-10));

    // a perturbation vanishing on the boundary strictly increases the energy
    ext::ExtensionField V = U;
    for (std::size_t j = 1; j < V.slices.size(); ++j) {
        double y = mesh.node(static_cast<int>(j));
        double bump = 0.3 * y * std::exp(-y);
        for (auto& val : V.slices[j].values) val += bump;
    }
    CHECK(ext::xs_norm(V) > ext::xs_norm(U));

    ext::ExtensionField Z = U;
    for (auto& slice : Z.slices)
        for (auto& v : slice.values) v = 0.0;
    CHECK(ext::xs_norm(Z) == 0.0);
}
