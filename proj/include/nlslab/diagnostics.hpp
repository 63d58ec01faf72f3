#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "nlslab/field.hpp"

namespace nlslab {

/// Mass \int |f|^2 dx by quadrature.
inline double mass(const WaveField& f) { return l2_norm_sq(f); }

/// L^q norm by quadrature (q >= 1).
inline double lq_norm(const WaveField& f, double q) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::pow(std::abs(v), q);
    return std::pow(acc * f.grid.cell_volume(), 1.0 / q);
}

/// Kinetic part \int |grad f|^2 dx, evaluated spectrally.
inline double grad_norm_sq(const WaveField& f) {
    return spectral_weighted_sum(forward_transform(f), [](double k2) { return k2; });
}

/// Defocusing energy  E = 1/2 \int |grad f|^2 + 1/(p+2) \int |f|^{p+2};
/// positive for every nonzero field.
inline double energy(const WaveField& f, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("energy: p must be positive");
    double pot = 0.0;
    const double q = p + 2.0;
    for (const auto& v : f.values) pot += std::pow(std::abs(v), q);
    pot *= f.grid.cell_volume();
    return 0.5 * grad_norm_sq(f) + pot / q;
}

/// Sobolev norm ( sum (1+|k|^2)^s |f^|^2 dk^n )^{1/2}, s in [0, 2].
inline double hs_norm(const WaveField& f, double s) {
    if (s < 0.0 || s > 2.0) throw std::invalid_argument("hs_norm: s must lie in [0, 2]");
    return std::sqrt(spectral_weighted_sum(forward_transform(f), [s](double k2) { return std::pow(1.0 + k2, s); }));
}

/// Second spatial moment \int |x|^2 |f|^2 dx.
inline double second_moment(const WaveField& f) {
    double acc = 0.0;
    const std::size_t sz = f.values.size();
    for (std::size_t i = 0; i < sz; ++i) acc += f.grid.x_sq(i) * std::norm(f.values[i]);
    return acc * f.grid.cell_volume();
}

/// Sigma norm: sqrt( \int |grad f|^2 + |f|^2 + |x|^2 |f|^2 ).
inline double sigma_norm(const WaveField& f) {
    return std::sqrt(grad_norm_sq(f) + mass(f) + second_moment(f));
}

/// || grad u - i x/(2t) u ||_{L^2}, the quantity whose decay upgrades L^2 to
/// H^1 scattering. Spectral gradient, pointwise x weight.
inline double gauge_gradient_deficit(const WaveField& u, double t) {
    if (t == 0.0) throw std::invalid_argument("gauge_gradient_deficit: t must be nonzero");
    auto grads = gradient(u);
    double acc = 0.0;
    const std::size_t sz = u.values.size();
    for (int axis = 0; axis < u.grid.dim(); ++axis) {
        const auto& gax = grads[static_cast<std::size_t>(axis)].values;
        for (std::size_t i = 0; i < sz; ++i) {
            double xa = axis == 0 ? u.grid.x_vec(i)[0] : u.grid.x_vec(i)[1];
            acc += std::norm(gax[i] - cdouble(0.0, xa / (2.0 * t)) * u.values[i]);
        }
    }
    return std::sqrt(acc * u.grid.cell_volume());
}

/// Renormalized variance \int (|x|^2/t^2) |u|^2 dx.
inline double renormalized_variance(const WaveField& u, double t) {
    if (t == 0.0) throw std::invalid_argument("renormalized_variance: t must be nonzero");
    return second_moment(u) / (t * t);
}

/// \int_{|x| > R t} (|x|^2/t^2) |u|^2 dx, sharp indicator by cell center.
inline double cone_exterior_moment(const WaveField& u, double t, double R) {
    if (!(t > 0.0) || !(R > 0.0)) throw std::invalid_argument("cone_exterior_moment: t and R must be positive");
    const double thr2 = (R * t) * (R * t);
    double acc = 0.0;
    const std::size_t sz = u.values.size();
    for (std::size_t i = 0; i < sz; ++i) {
        double x2 = u.grid.x_sq(i);
        if (x2 > thr2) acc += x2 * std::norm(u.values[i]);
    }
    return acc * u.grid.cell_volume() / (t * t);
}

/// \int_{|x| > R} |x|^2 |w|^2 dx, sharp indicator by cell center.
inline double cylinder_exterior_moment(const WaveField& w, double R) {
    if (!(R > 0.0)) throw std::invalid_argument("cylinder_exterior_moment: R must be positive");
    const double thr2 = R * R;
    double acc = 0.0;
    const std::size_t sz = w.values.size();
    for (std::size_t i = 0; i < sz; ++i) {
        double x2 = w.grid.x_sq(i);
        if (x2 > thr2) acc += x2 * std::norm(w.values[i]);
    }
    return acc * w.grid.cell_volume();
}

/// Fraction of total mass beyond |x| > fraction*L; the wrap-around guard
/// compares this against its tolerance.
inline double boundary_mass_fraction(const WaveField& f, double fraction = 0.9) {
    const double thr2 = fraction * fraction * f.grid.half_width() * f.grid.half_width();
    double outer = 0.0, total = 0.0;
    const std::size_t sz = f.values.size();
    for (std::size_t i = 0; i < sz; ++i) {
        double a = std::norm(f.values[i]);
        total += a;
        if (f.grid.x_sq(i) > thr2) outer += a;
    }
    return total > 0.0 ? outer / total : 0.0;
}

/// One sampled row of run diagnostics. CSV column order is fixed:
/// time,mass,energy,h1,sigma,lp2,variance,cone_ext,gauge_deficit
struct DiagnosticRecord {
    double time = 0.0;
    double mass = 0.0;
    double energy = 0.0;
    double h1_norm = 0.0;
    double sigma_norm = 0.0;
    double lp2_norm = 0.0;
    double renorm_variance = 0.0;
    double cone_exterior = 0.0;
    double gauge_deficit = 0.0;

    static const char* csv_header() { return "time,mass,energy,h1,sigma,lp2,variance,cone_ext,gauge_deficit"; }

    std::string csv_row() const {
        char buf[512];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", time, mass, energy,
                      h1_norm, sigma_norm, lp2_norm, renorm_variance, cone_exterior, gauge_deficit);
        return buf;
    }
};

/// Evaluate the full record at time t. The time-weighted entries need t != 0
/// and are reported as 0 at t = 0 (not defined there).
inline DiagnosticRecord compute_record(const WaveField& f, double t, double p, double cone_radius) {
    DiagnosticRecord r;
    r.time = t;
    r.mass = mass(f);
    r.energy = energy(f, p);
    r.h1_norm = hs_norm(f, 1.0);
    r.sigma_norm = sigma_norm(f);
    r.lp2_norm = lq_norm(f, p + 2.0);
    if (t != 0.0) {
        r.renorm_variance = renormalized_variance(f, t);
        r.gauge_deficit = gauge_gradient_deficit(f, t);
        if (t > 0.0) r.cone_exterior = cone_exterior_moment(f, t, cone_radius);
    }
    return r;
}

} // namespace nlslab
