#include <catch2/catch_amalgamated.hpp>

#include "nlslab/field.hpp"
#include "test_support.hpp"

using namespace nlslab;
using testsup::gaussian1d;
using testsup::random_resolved_field;

TEST_CASE("make_grid definition arithmetic") {
    Grid g = make_grid(1, 16, 8.0);
    CHECK(g.dx() == 1.0);
    CHECK(g.dx() * g.points_per_axis() == 2.0 * g.half_width()); // exact in doubles
    CHECK(g.k(0) == Catch::Approx(-std::numbers::pi).epsilon(1e-15));
    CHECK(g.k(8) == 0.0);
    CHECK(g.k(9) == Catch::Approx(std::numbers::pi / 8.0).epsilon(1e-15));

    Grid g2 = make_grid(1, 1024, 40.0 * std::numbers::pi);
    CHECK(g2.dx() == Catch::Approx(80.0 * std::numbers::pi / 1024.0).epsilon(1e-15));

    Grid g3 = make_grid(2, 256, 20.0);
    CHECK(g3.size() == 256u * 256u);
    CHECK(g3.k(129) == Catch::Approx(std::numbers::pi / 20.0).epsilon(1e-15));

    // wavenumber lattice symmetric up to the single Nyquist mode
    for (int m = 1; m < 8; ++m) CHECK(g.k(8 + m) == -g.k(8 - m));
}

TEST_CASE("make_grid rejects bad parameters") {
    CHECK_THROWS_AS(make_grid(3, 64, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 48, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 8, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 64, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, 64, -2.0), std::invalid_argument);
}

TEST_CASE("transform of zero is zero") {
    Grid g = make_grid(1, 64, 4.0);
    WaveField z(g);
    Spectrum s = forward_transform(z);
    for (auto c : s.coefficients) CHECK(std::abs(c) == 0.0);
}

TEST_CASE("Gaussian transform pair under the unitary convention") {
    Grid g = make_grid(1, 1024, 40.0 * std::numbers::pi);
    Spectrum s = forward_transform(gaussian1d(g));
    double maxerr = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double k = g.k(static_cast<int>(i));
        maxerr = std::max(maxerr, std::abs(s.coefficients[i] - cdouble(std::exp(-0.5 * k * k), 0.0)));
    }
    CHECK(maxerr <= 1e-10);
}

TEST_CASE("lattice mode maps to a single spike carrying the full norm") {
    Grid g = make_grid(1, 256, 16.0);
    const int m0 = 19;
    WaveField e(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        double ph = g.dk() * m0 * g.x(static_cast<int>(j));
        e.values[j] = cdouble(std::cos(ph), std::sin(ph));
    }
    Spectrum s = forward_transform(e);
    double off = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (static_cast<int>(i) - g.points_per_axis() / 2 == m0) continue;
        off = std::max(off, std::abs(s.coefficients[i]));
    }
    const std::size_t spike = static_cast<std::size_t>(m0 + g.points_per_axis() / 2);
    CHECK(std::abs(s.coefficients[spike]) * std::sqrt(g.mode_volume()) == Catch::Approx(l2_norm(e)).epsilon(1e-12));
    CHECK(off <= 1e-11 * std::abs(s.coefficients[spike]));
}

TEST_CASE("round trip and Plancherel on random fields") {
    for (unsigned seed : {1u, 2u, 3u}) {
        Grid g = make_grid(1, 512, 25.0);
        WaveField h = random_resolved_field(g, seed);
        Spectrum s = forward_transform(h);
        CHECK(std::abs(l2_norm(s) - l2_norm(h)) <= 1e-12 * l2_norm(h));
        WaveField back = inverse_transform(s);
        CHECK(l2_distance(back, h) <= 1e-12 * l2_norm(h));
    }
    Grid g2 = make_grid(2, 64, 6.0);
    WaveField h2 = random_resolved_field(g2, 9u);
    CHECK(std::abs(l2_norm_spectral(h2) - l2_norm(h2)) <= 1e-12 * l2_norm(h2));
    CHECK(l2_distance(inverse_transform(forward_transform(h2)), h2) <= 1e-12 * l2_norm(h2));
}

TEST_CASE("apply_multiplier identity and eigenmode") {
    Grid g = make_grid(1, 256, 12.0);
    WaveField h = random_resolved_field(g, 4u);
    Spectrum s = forward_transform(h);
    Spectrum id = apply_multiplier(s, [](const std::array<double, 2>&) { return 1.0; });
    CHECK(l2_distance(inverse_transform(id), h) <= 1e-12 * l2_norm(h));

    const int m0 = 11;
    WaveField e(g);
    double k0 = g.dk() * m0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        double ph = k0 * g.x(static_cast<int>(j));
        e.values[j] = cdouble(std::cos(ph), std::sin(ph));
    }
    Spectrum se = apply_multiplier(forward_transform(e), [](const std::array<double, 2>& k) {
        return k[0] * k[0] + k[1] * k[1];
    });
    WaveField lap = inverse_transform(se);
    CHECK(l2_distance(lap, cdouble(k0 * k0, 0.0) * e) <= 1e-10 * k0 * k0 * l2_norm(e));
}

TEST_CASE("spectral derivative matches the symbolic Gaussian derivative") {
    Grid g = make_grid(1, 1024, 40.0 * std::numbers::pi);
    Spectrum s = forward_transform(gaussian1d(g));
    Spectrum ds = apply_multiplier(s, [](const std::array<double, 2>& k) { return cdouble(0.0, k[0]); });
    WaveField d = inverse_transform(ds);
    double maxerr = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        double x = g.x(static_cast<int>(j));
        maxerr = std::max(maxerr, std::abs(d.values[j] - cdouble(-x * std::exp(-0.5 * x * x), 0.0)));
    }
    CHECK(maxerr <= 1e-9);
}

TEST_CASE("derivative consistency on resolved bumps") {
    // compact bump exp(-1/(1-(x/3)^2)) on |x|<3; bump spectra decay like
    // exp(-c sqrt(k)), so hitting 1e-8 needs real headroom past "16 points
    // across the width"
    Grid g = make_grid(1, 2048, 12.0);
    WaveField b(g);
    auto bump = [](double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; };
    for (std::size_t j = 0; j < g.size(); ++j) b.values[j] = bump(g.x(static_cast<int>(j)) / 3.0);
    auto grads = gradient(b);
    double maxerr = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        double u = g.x(static_cast<int>(j)) / 3.0;
        double exact = std::abs(u) < 1.0
                           ? bump(u) * (-2.0 * u / ((1.0 - u * u) * (1.0 - u * u))) / 3.0
                           : 0.0;
        maxerr = std::max(maxerr, std::abs(grads[0].values[j] - cdouble(exact, 0.0)));
    }
    CHECK(maxerr <= 1e-8);
}

TEST_CASE("grid mismatch is rejected") {
    Grid a = make_grid(1, 64, 4.0);
    Grid b = make_grid(1, 64, 5.0);
    CHECK_THROWS_AS(WaveField(a) + WaveField(b), std::invalid_argument);
}

TEST_CASE("dual grid pairing is an involution") {
    Grid g = make_grid(1, 512, 30.0);
    Grid d = dual_grid(g);
    CHECK(dual_grid(d) == g);
    CHECK(d.half_width() == g.k_max());
}
