#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nlslab/errors.hpp"
#include "nlslab/fft.hpp"
#include "nlslab/grid.hpp"

namespace nlslab {

using cdouble = std::complex<double>;

/// Complex-valued samples of u, w or v on a Grid at one instant.
struct WaveField {
    Grid grid;
    std::vector<cdouble> values; // row-major, axis 0 fastest
    double time_tag = 0.0;

    WaveField(const Grid& g, double t = 0.0) : grid(g), values(g.size(), cdouble{0.0, 0.0}), time_tag(t) {}
    WaveField(const Grid& g, std::vector<cdouble> v, double t = 0.0) : grid(g), values(std::move(v)), time_tag(t) {
        if (values.size() != grid.size()) throw std::invalid_argument("WaveField: sample count does not match grid");
    }
};

/// Fourier coefficients on the shifted wavenumber lattice of `grid`.
///
/// The convention is the unitary transform
///     h^(k) = (2 pi)^{-n/2} \int e^{-i x.k} h(x) dx,
/// discretized with the trapezoid/DFT quadrature on [-L, L)^n. Under it the
/// Gaussian pair e^{-x^2/2} <-> e^{-k^2/2} holds exactly and Plancherel reads
/// sum |h|^2 dx^n = sum |h^|^2 dk^n.
struct Spectrum {
    Grid grid;
    std::vector<cdouble> coefficients; // shifted order: index i -> m = i - N/2

    Spectrum(const Grid& g) : grid(g), coefficients(g.size(), cdouble{0.0, 0.0}) {}
    Spectrum(const Grid& g, std::vector<cdouble> c) : grid(g), coefficients(std::move(c)) {
        if (coefficients.size() != grid.size()) throw std::invalid_argument("Spectrum: size does not match grid");
    }
};

namespace detail {

// One axis of the shifted DFT. `sign` < 0 maps physical -> spectral.
// Shift and alternating parity implement the -L domain offset so that the
// output is the continuum-convention transform sampled at k_m, in math order.
inline void shifted_axis_pass(std::vector<cdouble>& data, int n_axis, int axis, int dim, int n, int sign) {
    const std::size_t nn = static_cast<std::size_t>(n_axis);
    std::vector<cdouble> line(nn), out(nn);
    const std::size_t lines = data.size() / nn;
    const std::size_t stride = (axis == 0) ? 1 : static_cast<std::size_t>(n);
    (void)dim;
    for (std::size_t l = 0; l < lines; ++l) {
        std::size_t base;
        if (axis == 0) {
            base = l * nn;
        } else {
            base = l; // column l, stride n
        }
        for (std::size_t j = 0; j < nn; ++j) line[j] = data[base + j * stride];

        if (sign < 0) {
            fft_pow2(line.data(), nn, -1);
            for (std::size_t idx = 0; idx < nn; ++idx) {
                std::size_t q = (idx >= nn / 2) ? idx - nn / 2 : idx + nn / 2;
                double parity = ((idx + nn / 2) & 1) ? -1.0 : 1.0;
                out[idx] = parity * line[q];
            }
        } else {
            for (std::size_t idx = 0; idx < nn; ++idx) {
                std::size_t q = (idx >= nn / 2) ? idx - nn / 2 : idx + nn / 2;
                double parity = ((idx + nn / 2) & 1) ? -1.0 : 1.0;
                out[q] = parity * line[idx];
            }
            fft_pow2(out.data(), nn, +1);
        }
        for (std::size_t j = 0; j < nn; ++j) data[base + j * stride] = out[j];
    }
}

} // namespace detail

inline Spectrum forward_transform(const WaveField& f) {
    const Grid& g = f.grid;
    std::vector<cdouble> buf = f.values;
    const int n = g.points_per_axis();
    for (int axis = 0; axis < g.dim(); ++axis) detail::shifted_axis_pass(buf, n, axis, g.dim(), n, -1);
    const double scale = std::pow(g.dx() / std::sqrt(2.0 * std::numbers::pi), g.dim());
    for (auto& c : buf) c *= scale;
    return Spectrum(g, std::move(buf));
}

inline WaveField inverse_transform(const Spectrum& s, double time_tag = 0.0) {
    const Grid& g = s.grid;
    std::vector<cdouble> buf = s.coefficients;
    const int n = g.points_per_axis();
    for (int axis = 0; axis < g.dim(); ++axis) detail::shifted_axis_pass(buf, n, axis, g.dim(), n, +1);
    const double scale = std::pow(g.dk() / std::sqrt(2.0 * std::numbers::pi), g.dim());
    for (auto& c : buf) c *= scale;
    return WaveField(g, std::move(buf), time_tag);
}

/// Pointwise multiplication in wavenumber space; m is called with the
/// wavenumber vector (second component 0 in 1D) and may return complex.
template <class F>
Spectrum apply_multiplier(const Spectrum& s, F&& m) {
    Spectrum out(s.grid);
    const std::size_t sz = s.coefficients.size();
    for (std::size_t i = 0; i < sz; ++i) out.coefficients[i] = s.coefficients[i] * cdouble(m(s.grid.k_vec(i)));
    return out;
}

/// Spectral gradient: per-axis inverse transforms of i k_a h^(k).
inline std::vector<WaveField> gradient(const WaveField& f) {
    Spectrum s = forward_transform(f);
    std::vector<WaveField> out;
    out.reserve(static_cast<std::size_t>(f.grid.dim()));
    for (int axis = 0; axis < f.grid.dim(); ++axis) {
        Spectrum d = apply_multiplier(s, [axis](const std::array<double, 2>& k) { return cdouble(0.0, k[axis]); });
        out.push_back(inverse_transform(d, f.time_tag));
    }
    return out;
}

// -- quadrature / Plancherel helpers ----------------------------------------

inline double l2_norm_sq(const WaveField& f) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::norm(v);
    return acc * f.grid.cell_volume();
}
inline double l2_norm(const WaveField& f) { return std::sqrt(l2_norm_sq(f)); }

inline double l2_norm_sq(const Spectrum& s) {
    double acc = 0.0;
    for (const auto& c : s.coefficients) acc += std::norm(c);
    return acc * s.grid.mode_volume();
}
inline double l2_norm(const Spectrum& s) { return std::sqrt(l2_norm_sq(s)); }

/// L2 norm evaluated through the spectral side (Plancherel cross-check path).
inline double l2_norm_spectral(const WaveField& f) { return l2_norm(forward_transform(f)); }

/// sum w(|k|^2) |h^(k)|^2 dk^n for a real weight w.
template <class W>
double spectral_weighted_sum(const Spectrum& s, W&& w) {
    double acc = 0.0;
    const std::size_t sz = s.coefficients.size();
    for (std::size_t i = 0; i < sz; ++i) acc += w(s.grid.k_sq(i)) * std::norm(s.coefficients[i]);
    return acc * s.grid.mode_volume();
}

inline bool all_finite(const WaveField& f) {
    for (const auto& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

/// Reinterpret spectral coefficients as samples on the dual grid
/// (used where the paper manipulates h^ as a function of its argument).
inline WaveField spectrum_as_field(const Spectrum& s, double time_tag = 0.0) {
    return WaveField(dual_grid(s.grid), s.coefficients, time_tag);
}

// -- small field algebra (grid-checked) --------------------------------------

inline void check_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw std::invalid_argument("grid mismatch between operands");
}

inline WaveField operator+(const WaveField& a, const WaveField& b) {
    check_same_grid(a.grid, b.grid);
    WaveField r(a.grid, a.time_tag);
    for (std::size_t i = 0; i < a.values.size(); ++i) r.values[i] = a.values[i] + b.values[i];
    return r;
}
inline WaveField operator-(const WaveField& a, const WaveField& b) {
    check_same_grid(a.grid, b.grid);
    WaveField r(a.grid, a.time_tag);
    for (std::size_t i = 0; i < a.values.size(); ++i) r.values[i] = a.values[i] - b.values[i];
    return r;
}
inline WaveField operator*(cdouble c, const WaveField& a) {
    WaveField r(a.grid, a.time_tag);
    for (std::size_t i = 0; i < a.values.size(); ++i) r.values[i] = c * a.values[i];
    return r;
}

inline double max_abs_diff(const WaveField& a, const WaveField& b) {
    check_same_grid(a.grid, b.grid);
    double m = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}
inline double l2_distance(const WaveField& a, const WaveField& b) { return l2_norm(a - b); }

} // namespace nlslab
