#pragma once

#include <cmath>

#include "nlslab/field.hpp"

namespace nlslab {

/// Gaussian datum family of the scenario configs:
///   A * exp(-|x - c|^2 / (2 w^2)) * exp(i v . x)
struct GaussianDatum {
    double amplitude = 1.0;
    double width = 1.0;
    std::array<double, 2> center{0.0, 0.0};
    std::array<double, 2> velocity{0.0, 0.0};
};

inline WaveField gaussian_field(const Grid& g, const GaussianDatum& d) {
    WaveField f(g);
    const double inv2w2 = 1.0 / (2.0 * d.width * d.width);
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto xv = g.x_vec(i);
        double r2 = (xv[0] - d.center[0]) * (xv[0] - d.center[0]);
        double vph = d.velocity[0] * xv[0];
        if (g.dim() == 2) {
            r2 += (xv[1] - d.center[1]) * (xv[1] - d.center[1]);
            vph += d.velocity[1] * xv[1];
        }
        f.values[i] = d.amplitude * std::exp(-r2 * inv2w2) * cdouble(std::cos(vph), std::sin(vph));
    }
    return f;
}

inline WaveField gaussian_field(const Grid& g, double amplitude, double width) {
    GaussianDatum d;
    d.amplitude = amplitude;
    d.width = width;
    return gaussian_field(g, d);
}

/// Hermite eigenstates of H = -Delta + |x|^2 in 1D (unnormalized):
/// m = 0: e^{-x^2/2} (eigenvalue 1), m = 1: x e^{-x^2/2} (eigenvalue 3).
inline WaveField hermite_state(const Grid& g, int m) {
    if (g.dim() != 1 || (m != 0 && m != 1)) throw std::invalid_argument("hermite_state: 1D, m in {0,1}");
    WaveField f(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        double x = g.x(static_cast<int>(i));
        f.values[i] = (m == 0 ? 1.0 : x) * std::exp(-0.5 * x * x);
    }
    return f;
}

} // namespace nlslab
