#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "relfrac/grid.hpp"
#include "relfrac/io.hpp"

#include <cmath>
#include <cstdio>
#include <random>

using namespace relfrac;

namespace {

grid::GridSpec spec1d(double L, int n) {
    grid::GridSpec s;
    s.dim = 1;
    s.half_width = L;
    s.n = n;
    return s;
}

grid::GridField random_field(const grid::GridSpec& spec, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    grid::GridField u(spec);
    for (auto& v : u.values) v = dist(rng);
    return u;
}

} // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(spec1d(1.0, 12).validate(), std::invalid_argument);  // not power of two
    CHECK_THROWS_AS(spec1d(1.0, 8).validate(), std::invalid_argument);   // too small
    CHECK_THROWS_AS(spec1d(-1.0, 32).validate(), std::invalid_argument); // bad L
    grid::GridSpec bad = spec1d(1.0, 32);
    bad.dim = 4;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("transform of zero is zero") {
    grid::GridField u(spec1d(5.0, 32));
    auto s = grid::transform(u);
    for (const auto& c : s.coeff) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("cosine mode has exactly two nonzero coefficients") {
    grid::GridSpec spec = spec1d(5.0, 64);
    double k0 = M_PI / spec.half_width * 3.0; // mode index 3
    grid::GridField u =
        grid::sample(spec, [&](const std::array<double, 3>& x) { return std::cos(k0 * x[0]); });
    auto s = grid::transform(u);
    // index-frame phases rotate the coefficients but not their magnitude
    int nonzero = 0;
    for (std::size_t j = 0; j < s.coeff.size(); ++j) {
        if (std::abs(s.coeff[j]) > 1e-12) {
            ++nonzero;
            CHECK(std::abs(s.coeff[j]) == doctest::Approx(0.5).epsilon(1e-12));
            CHECK((j == 3 || j == s.coeff.size() - 3));
        }
    }
    CHECK(nonzero == 2);
}

TEST_CASE("round trip and Parseval") {
    for (int dim : {1, 2}) {
        grid::GridSpec spec = spec1d(4.0, 32);
        spec.dim = dim;
        grid::GridField u = random_field(spec, 7u + dim);
        auto s = grid::transform(u);
        grid::GridField back = grid::inverse_transform(s);
        double num = 0, den = 0, spec_sum = 0, phys_sum = 0;
        for (std::size_t i = 0; i < u.values.size(); ++i) {
            num += (back.values[i] - u.values[i]) * (back.values[i] - u.values[i]);
            den += u.values[i] * u.values[i];
            phys_sum += u.values[i] * u.values[i];
        }
        for (const auto& c : s.coeff) spec_sum += std::norm(c);
        CHECK(std::sqrt(num / den) < 1e-12);
        CHECK(phys_sum * spec.cell_volume() ==
              doctest::Approx(spec_sum * spec.box_volume()).epsilon(1e-12));
    }
}

TEST_CASE("multiplier identity, eigenfunction and algebra") {
    grid::GridSpec spec = spec1d(5.0, 64);
    grid::GridField u = random_field(spec, 42);

    grid::GridField same = grid::apply_radial_multiplier(u, [](double) { return 1.0; });
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(same.values[i] == doctest::Approx(u.values[i]).epsilon(1e-12));

    double k0 = M_PI / spec.half_width * 5.0;
    grid::GridField c =
        grid::sample(spec, [&](const std::array<double, 3>& x) { return std::cos(k0 * x[0]); });
    grid::GridField lap = grid::apply_radial_multiplier(c, [](double k2) { return k2; });
    for (std::size_t i = 0; i < c.values.size(); ++i)
        CHECK(lap.values[i] == doctest::Approx(k0 * k0 * c.values[i]).epsilon(1e-10));

    // product of symbols equals composition of applications
    auto sym1 = [](double k2) { return std::pow(k2 + 1.0, 0.3); };
    auto sym2 = [](double k2) { return 1.0 / (k2 + 2.0); };
    grid::GridField comp =
        grid::apply_radial_multiplier(grid::apply_radial_multiplier(u, sym1), sym2);
    grid::GridField prod =
        grid::apply_radial_multiplier(u, [&](double k2) { return sym1(k2) * sym2(k2); });
    double num = 0, den = 0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        num += (comp.values[i] - prod.values[i]) * (comp.values[i] - prod.values[i]);
        den += prod.values[i] * prod.values[i];
    }
    CHECK(std::sqrt(num / den) < 1e-12);
}

TEST_CASE("non-finite symbol is reported with the frequency") {
    grid::GridField u = random_field(spec1d(5.0, 32), 3);
    CHECK_THROWS_AS(grid::apply_radial_multiplier(
                        u, [](double k2) { return k2 == 0.0 ? NAN : 1.0; }),
                    std::runtime_error);
}

TEST_CASE("convolution with a discrete delta is the identity") {
    grid::GridSpec spec = spec1d(5.0, 64);
    double h = spec.spacing();
    grid::GridField u = random_field(spec, 11);
    RadialKernelTable delta;
    delta.eval_fn = [h](double r) { return r < 0.5 * h ? 1.0 / h : 0.0; };
    auto res = grid::convolve_radial(u, delta);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(res.field.values[i] == doctest::Approx(u.values[i]).epsilon(1e-12));
}

TEST_CASE("unit-mass kernel preserves constants") {
    grid::GridSpec spec = spec1d(10.0, 128);
    grid::GridField u(spec);
    for (auto& v : u.values) v = 3.25;
    double sig = 0.8;
    RadialKernelTable gauss;
    gauss.eval_fn = [sig](double r) {
        return std::exp(-r * r / (2 * sig * sig)) / std::sqrt(2 * M_PI * sig * sig);
    };
    auto res = grid::convolve_radial(u, gauss);
    CHECK_FALSE(res.truncated);
    for (std::size_t i = 0; i < u.values.size(); ++i)
        CHECK(res.field.values[i] == doctest::Approx(3.25).epsilon(1e-10));
}

TEST_CASE("Gaussian * Gaussian has summed variances") {
    grid::GridSpec spec = spec1d(12.0, 256);
    double s1 = 0.7, s2 = 1.1;
    grid::GridField u = grid::sample(spec, [&](const std::array<double, 3>& x) {
        return std::exp(-x[0] * x[0] / (2 * s1 * s1));
    });
    RadialKernelTable k2;
    k2.eval_fn = [s2](double r) {
        return std::exp(-r * r / (2 * s2 * s2)) / std::sqrt(2 * M_PI * s2 * s2);
    };
    auto res = grid::convolve_radial(u, k2);
    double sc = std::sqrt(s1 * s1 + s2 * s2);
    double amp = s1 / sc;
    double worst = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        double x = spec.coord(static_cast<int>(i));
        double exact = amp * std::exp(-x * x / (2 * sc * sc));
        worst = std::max(worst, std::abs(res.field.values[i] - exact));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("convolution commutes with whole-cell translations") {
    grid::GridSpec spec = spec1d(6.0, 64);
    grid::GridField u = random_field(spec, 19);
    RadialKernelTable gauss;
    gauss.eval_fn = [](double r) { return std::exp(-r * r); };
    auto direct = grid::convolve_radial(u, gauss).field;
    grid::GridField shifted(spec);
    const int shift = 5;
    for (int i = 0; i < spec.n; ++i)
        shifted.values[static_cast<std::size_t>((i + shift) % spec.n)] =
            u.values[static_cast<std::size_t>(i)];
    auto conv_shifted = grid::convolve_radial(shifted, gauss).field;
    for (int i = 0; i < spec.n; ++i)
        CHECK(conv_shifted.values[static_cast<std::size_t>((i + shift) % spec.n)] ==
              doctest::Approx(direct.values[static_cast<std::size_t>(i)]).epsilon(1e-12));
}

TEST_CASE("truncation warning for a fat-tailed kernel") {
    grid::GridSpec spec = spec1d(5.0, 32);
    grid::GridField u = random_field(spec, 2);
    RadialKernelTable slow;
    slow.eval_fn = [](double r) { return 1.0 / (1.0 + r * r); };
    CHECK(grid::convolve_radial(u, slow).truncated);
}

TEST_CASE("binary field dump round trip is bit exact") {
    grid::GridSpec spec = spec1d(7.0, 32);
    grid::GridField u = random_field(spec, 77);
    std::string path = "test_field_roundtrip.rfgf";
    io::write_field(path, u);
    grid::GridField back = io::read_field(path);
    CHECK(back.spec == u.spec);
    for (std::size_t i = 0; i < u.values.size(); ++i) CHECK(back.values[i] == u.values[i]);
    std::remove(path.c_str());
}
