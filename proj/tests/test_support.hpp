#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// must stay independent of the implementation paths they check: quadrature is
// plain trapezoid sums on sampled closed forms, never the library's spectral
// route.

#include <complex>
#include <random>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/initial_data.hpp"

namespace testsup {

using nlslab::cdouble;
using nlslab::Grid;
using nlslab::WaveField;

inline WaveField gaussian1d(const Grid& g, double A = 1.0, double w = 1.0) {
    return nlslab::gaussian_field(g, A, w);
}

/// Band-limited random field: seeded coefficients under a spectral envelope,
/// zero outside |k| <= k_max/4 so every resolution audit passes.
inline WaveField random_resolved_field(const Grid& g, unsigned seed, double k_cut_fraction = 0.25) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    nlslab::Spectrum s(g);
    const double kcut = g.k_max() * k_cut_fraction;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto kv = g.k_vec(i);
        if (std::abs(kv[0]) <= kcut && std::abs(kv[1]) <= kcut) {
            double env = std::exp(-g.k_sq(i) / (kcut * kcut));
            s.coefficients[i] = cdouble(gauss(rng), gauss(rng)) * env;
        }
    }
    return nlslab::inverse_transform(s);
}

/// Trapezoid quadrature of a sampled function on the grid (periodic, so the
/// plain scaled sum); independent of the library quadrature helpers.
template <class F>
double quad_oracle(const Grid& g, F&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto xv = g.x_vec(i);
        acc += f(xv[0], xv[1]);
    }
    return acc * (g.dim() == 1 ? g.dx() : g.dx() * g.dx());
}

/// Closed-form free evolution of A e^{-x^2/(2w^2)} under i u_t + u_xx = 0.
inline cdouble free_gaussian_1d(double A, double w, double t, double x) {
    const cdouble a(w * w, 2.0 * t);
    return A * w * std::pow(a, -0.5) * std::exp(-x * x / (2.0 * a));
}

} // namespace testsup
