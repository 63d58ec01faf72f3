#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "nlslab/diagnostics.hpp"
#include "nlslab/exponents.hpp"
#include "nlslab/field.hpp"

namespace nlslab {

// Sign conventions, frozen here and pinned by the Hermite and lens identity
// tests: kinetic substeps apply the multiplier e^{-i|k|^2 tau} (the group
// e^{i tau Delta}); the harmonic potential phase is e^{-i|x|^2 tau}, so
// harmonic_flow approximates e^{-itH} with H = -Delta + |x|^2 and the Hermite
// ground state acquires the phase e^{-it}. The lens identity then holds as
// L_{t(s)} o e^{is Delta} = e^{-i t(s) H}.
inline constexpr int kHarmonicFlowSign = -1;

/// Exact free propagator e^{it Delta}: spectral multiplier e^{-i|k|^2 t}.
/// An isometry on every H^s up to roundoff.
inline WaveField free_flow(const WaveField& f, double t) {
    Spectrum s = forward_transform(f);
    const std::size_t sz = s.coefficients.size();
    for (std::size_t i = 0; i < sz; ++i) {
        double ph = -s.grid.k_sq(i) * t;
        s.coefficients[i] *= cdouble(std::cos(ph), std::sin(ph));
    }
    WaveField out = inverse_transform(s, f.time_tag + t);
    return out;
}

namespace detail {

// In-place kinetic multiplier exp(-i k^2 tau) on raw physical samples.
inline void kinetic_inplace(std::vector<cdouble>& values, const Grid& g, const std::vector<double>& k2, double tau) {
    if (tau == 0.0) return;
    const int n = g.points_per_axis();
    for (int axis = 0; axis < g.dim(); ++axis) shifted_axis_pass(values, n, axis, g.dim(), n, -1);
    const double invn = std::pow(1.0 / static_cast<double>(n), g.dim());
    const std::size_t sz = values.size();
    for (std::size_t i = 0; i < sz; ++i) {
        double ph = -k2[i] * tau;
        values[i] *= cdouble(invn * std::cos(ph), invn * std::sin(ph));
    }
    for (int axis = 0; axis < g.dim(); ++axis) shifted_axis_pass(values, n, axis, g.dim(), n, +1);
}

// 8-node Gauss-Legendre on [-1, 1].
inline constexpr std::array<double, 8> kGlNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                                   -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                                   0.7966664774136267,  0.9602898564975363};
inline constexpr std::array<double, 8> kGlWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                     0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                     0.2223810344533745, 0.1012285362903763};

} // namespace detail

enum class EquationVariant { PhysicalNLS, PseudoConformal, Lens };

/// One defocusing evolution, parameterized by the time weight in front of the
/// nonlinearity: 1 for the physical equation, t^{-alpha} for the
/// pseudo-conformal equation on (0, infty), cos(2t)^{-alpha} for the lens
/// equation on (-pi/4, pi/4).
struct EquationSpec {
    EquationVariant variant = EquationVariant::PhysicalNLS;
    ExponentData exponents;

    double weight(double t) const {
        switch (variant) {
            case EquationVariant::PhysicalNLS: return 1.0;
            case EquationVariant::PseudoConformal: return std::pow(t, -exponents.alpha);
            case EquationVariant::Lens: return std::pow(std::cos(2.0 * t), -exponents.alpha);
        }
        return 1.0;
    }

    /// Signed integral of the weight over [a, b]; closed form for the power
    /// weight, 8-node Gauss-Legendre for the cosine weight.
    double weight_integral(double a, double b) const {
        const double al = exponents.alpha;
        if (variant == EquationVariant::PhysicalNLS || al == 0.0) return b - a;
        if (variant == EquationVariant::PseudoConformal) {
            if (al == 1.0) return std::log(b) - std::log(a);
            return (std::pow(b, 1.0 - al) - std::pow(a, 1.0 - al)) / (1.0 - al);
        }
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (std::size_t q = 0; q < detail::kGlNodes.size(); ++q)
            acc += detail::kGlWeights[q] * std::pow(std::cos(2.0 * (mid + half * detail::kGlNodes[q])), -al);
        return acc * half;
    }

    /// Endpoint where the weight blows up on the side of `t_from` toward
    /// `t_to`, if any (0 for the pseudo-conformal weight, +-pi/4 for the lens).
    std::optional<double> singularity() const {
        if (variant == EquationVariant::PseudoConformal) return 0.0;
        if (variant == EquationVariant::Lens) return std::numbers::pi / 4.0; // mirrored at -pi/4
        return std::nullopt;
    }
};

inline EquationSpec physical_nls(int n, double p) {
    return EquationSpec{EquationVariant::PhysicalNLS, classify_exponent(n, p)};
}
inline EquationSpec pseudo_conformal_equation(int n, double p) {
    return EquationSpec{EquationVariant::PseudoConformal, classify_exponent(n, p)};
}
inline EquationSpec lens_equation(int n, double p) {
    return EquationSpec{EquationVariant::Lens, classify_exponent(n, p)};
}

/// Strang propagator for e^{-itH}, H = -Delta + |x|^2 (see kHarmonicFlowSign).
/// Second-order in dt; both substeps are exact flows.
inline WaveField harmonic_flow(const WaveField& f, double t, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("harmonic_flow: dt must be positive");
    if (t == 0.0) return f;
    const Grid& g = f.grid;
    const long nsteps = std::max(1L, std::lround(std::ceil(std::abs(t) / dt)));
    const double h = t / static_cast<double>(nsteps);

    std::vector<double> k2(g.size()), x2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        k2[i] = g.k_sq(i);
        x2[i] = g.x_sq(i);
    }
    auto potential = [&](std::vector<cdouble>& v, double tau) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            double ph = -x2[i] * tau;
            v[i] *= cdouble(std::cos(ph), std::sin(ph));
        }
    };

    std::vector<cdouble> v = f.values;
    potential(v, 0.5 * h);
    for (long s = 0; s < nsteps; ++s) {
        detail::kinetic_inplace(v, g, k2, h);
        potential(v, s + 1 < nsteps ? h : 0.5 * h);
    }
    return WaveField(g, std::move(v), f.time_tag + t);
}

/// Step-size policy; near a singular weight endpoint the step is shrunk so
/// that the per-step weight integral stays within the budget kappa
/// (default: 1% of the total weight integral over the span).
struct StepPolicy {
    double base_dt = 1e-3;
    std::optional<double> singular_endpoint{};
    double weight_budget = 0.0; // kappa; <= 0 selects the default
    std::size_t max_steps = 10'000'000;
};

struct EvolveOptions {
    std::vector<double> sample_times;                                       // where records are taken
    std::function<void(const WaveField&, const DiagnosticRecord&)> on_sample; // optional observer
    double cone_radius = 10.0;
    double guard_fraction = 0.9;
    double guard_tolerance = 1e-8;
    bool record_at_endpoints = true; // include t0 and t1 as samples
};

struct EvolveResult {
    WaveField state;
    std::vector<DiagnosticRecord> records;
    std::size_t steps = 0;
};

/// Strang split-step evolution of one EquationSpec from t0 to t1 (either
/// direction). Kinetic substeps are exact multipliers; the pointwise substep
/// integrates the weighted nonlinearity (plus |x|^2 for the lens variant)
/// exactly over the step, so no order is lost against singular weights.
/// Mass is conserved to roundoff. Throws wraparound_error when the guard
/// fails at a sample, numerics_error on NaN or an exhausted step budget.
inline EvolveResult evolve(const EquationSpec& eq, const WaveField& f0, double t0, double t1,
                           const StepPolicy& policy, const EvolveOptions& opts = {}) {
    const Grid& g = f0.grid;
    if (eq.exponents.n != g.dim())
        throw std::invalid_argument("evolve: exponent dimension does not match grid dimension");
    if (!(policy.base_dt > 0.0)) throw std::invalid_argument("evolve: base_dt must be positive");
    if (eq.variant == EquationVariant::PseudoConformal && (t0 <= 0.0 || t1 <= 0.0))
        throw std::invalid_argument("evolve: pseudo-conformal span must stay in t > 0");
    if (eq.variant == EquationVariant::Lens &&
        (std::abs(t0) >= std::numbers::pi / 4.0 || std::abs(t1) >= std::numbers::pi / 4.0))
        throw std::invalid_argument("evolve: lens span must stay inside (-pi/4, pi/4)");

    const double dir = (t1 >= t0) ? 1.0 : -1.0;
    const double p = eq.exponents.p;

    // effective per-step weight budget
    double kappa = std::numeric_limits<double>::infinity();
    if (eq.variant != EquationVariant::PhysicalNLS && eq.exponents.alpha != 0.0 && t1 != t0) {
        kappa = policy.weight_budget > 0.0 ? policy.weight_budget : 0.01 * std::abs(eq.weight_integral(t0, t1));
    }

    std::vector<double> samples = opts.sample_times;
    if (opts.record_at_endpoints) {
        samples.push_back(t0);
        samples.push_back(t1);
    }
    std::sort(samples.begin(), samples.end());
    if (dir < 0) std::reverse(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
    for (double ts : samples)
        if (dir * (ts - t0) < -1e-12 || dir * (t1 - ts) < -1e-12)
            throw std::invalid_argument("evolve: sample time outside the run span");

    std::vector<double> k2(g.size()), x2(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        k2[i] = g.k_sq(i);
        if (eq.variant == EquationVariant::Lens) x2[i] = g.x_sq(i);
    }

    EvolveResult res{f0, {}, 0};
    res.state.time_tag = t0;

    auto guard_and_record = [&](double t) {
        if (!all_finite(res.state)) throw numerics_error("evolve: NaN/Inf detected at t = " + std::to_string(t));
        if (boundary_mass_fraction(res.state, opts.guard_fraction) > opts.guard_tolerance)
            throw wraparound_error("evolve: wrap-around guard violated at t = " + std::to_string(t));
        res.state.time_tag = t;
        DiagnosticRecord r = compute_record(res.state, t, p, opts.cone_radius);
        res.records.push_back(r);
        if (opts.on_sample) opts.on_sample(res.state, r);
    };

    std::size_t sample_idx = 0;
    if (sample_idx < samples.size() && samples[sample_idx] == t0) {
        guard_and_record(t0);
        ++sample_idx;
    } else {
        if (boundary_mass_fraction(res.state, opts.guard_fraction) > opts.guard_tolerance)
            throw wraparound_error("evolve: wrap-around guard violated at t0");
    }
    if (t0 == t1) return res;

    // kinetic multiplier cache (most steps share the same tau)
    std::vector<cdouble> kin_phase(g.size());
    double cached_tau = std::numeric_limits<double>::quiet_NaN();
    const double invn = std::pow(1.0 / static_cast<double>(g.points_per_axis()), g.dim());
    auto kinetic = [&](double tau) {
        if (tau == 0.0) return;
        if (tau != cached_tau) {
            for (std::size_t i = 0; i < g.size(); ++i) {
                double ph = -k2[i] * tau;
                kin_phase[i] = cdouble(invn * std::cos(ph), invn * std::sin(ph));
            }
            cached_tau = tau;
        }
        auto& v = res.state.values;
        const int n = g.points_per_axis();
        for (int axis = 0; axis < g.dim(); ++axis) detail::shifted_axis_pass(v, n, axis, g.dim(), n, -1);
        for (std::size_t i = 0; i < g.size(); ++i) v[i] *= kin_phase[i];
        for (int axis = 0; axis < g.dim(); ++axis) detail::shifted_axis_pass(v, n, axis, g.dim(), n, +1);
    };

    double t = t0;
    double pending_half = 0.0;
    while (t != t1) {
        if (++res.steps > policy.max_steps)
            throw numerics_error("evolve: max_steps exhausted before reaching t1 (weight budget too tight?)");

        const double target = (sample_idx < samples.size()) ? samples[sample_idx] : t1;
        double dt = std::min(policy.base_dt, std::abs(target - t));

        if (std::isfinite(kappa) && std::abs(eq.weight_integral(t, t + dir * dt)) > kappa) {
            double lo = 0.0, hi = dt;
            for (int it = 0; it < 60 && (hi - lo) > 1e-3 * hi; ++it) {
                double mid = 0.5 * (lo + hi);
                if (std::abs(eq.weight_integral(t, t + dir * mid)) > kappa)
                    hi = mid;
                else
                    lo = mid;
            }
            dt = lo > 0.0 ? lo : hi * 1e-3;
        }

        const bool lands = std::abs(target - t) <= dt * (1.0 + 1e-12);
        const double t_next = lands ? target : t + dir * dt;
        const double h = t_next - t;

        kinetic(pending_half + 0.5 * h);

        const double iw = eq.weight_integral(t, t_next);
        auto& v = res.state.values;
        if (eq.variant == EquationVariant::Lens) {
            for (std::size_t i = 0; i < v.size(); ++i) {
                double ph = -(x2[i] * h + std::pow(std::abs(v[i]), p) * iw);
                v[i] *= cdouble(std::cos(ph), std::sin(ph));
            }
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) {
                double ph = -std::pow(std::abs(v[i]), p) * iw;
                v[i] *= cdouble(std::cos(ph), std::sin(ph));
            }
        }
        pending_half = 0.5 * h;
        t = t_next;

        if (!std::isfinite(v[0].real()) || !std::isfinite(v[0].imag()))
            throw numerics_error("evolve: NaN/Inf detected at t = " + std::to_string(t));

        const bool at_sample = (sample_idx < samples.size() && t == samples[sample_idx]);
        if (at_sample || t == t1) {
            kinetic(pending_half);
            pending_half = 0.0;
            if (at_sample) {
                guard_and_record(t);
                ++sample_idx;
            }
        }
    }
    res.state.time_tag = t1;
    return res;
}

struct ConvergenceOrder {
    double order = 0.0;
    bool exact = false; // differences at roundoff scale; order not measurable
    double err_coarse = 0.0;
    double err_fine = 0.0;
};

/// Richardson self-convergence estimate of the splitting order from runs at
/// dt, dt/2, dt/4 over [t0, t1].
inline ConvergenceOrder self_convergence_order(const EquationSpec& eq, const WaveField& f0, double t0, double t1,
                                               double dt) {
    StepPolicy p1{dt}, p2{dt / 2.0}, p4{dt / 4.0};
    p1.weight_budget = p2.weight_budget = p4.weight_budget = std::numeric_limits<double>::max();
    EvolveOptions quiet;
    quiet.record_at_endpoints = false;
    WaveField u1 = evolve(eq, f0, t0, t1, p1, quiet).state;
    WaveField u2 = evolve(eq, f0, t0, t1, p2, quiet).state;
    WaveField u4 = evolve(eq, f0, t0, t1, p4, quiet).state;
    ConvergenceOrder c;
    c.err_coarse = l2_distance(u1, u2);
    c.err_fine = l2_distance(u2, u4);
    const double scale = l2_norm(u4) + 1.0;
    if (c.err_fine < 1e-12 * scale) {
        c.exact = true;
        c.order = std::numeric_limits<double>::infinity();
    } else {
        c.order = std::log2(c.err_coarse / c.err_fine);
    }
    return c;
}

/// Monitored functional along a pseudo-conformal or lens trajectory:
///   pseudo-conformal: M(t) = t^alpha ||grad w||^2 + 2/(p+2) ||w||_{p+2}^{p+2}
///   lens:             M(t) = cos(2t)^alpha ||v||_Sigma^2 + 1/(p+2) ||v||_{p+2}^{p+2}
/// Built from sampled DiagnosticRecords (grad^2 = h1^2 - mass).
inline std::vector<std::pair<double, double>> monitored_functional(const std::vector<DiagnosticRecord>& records,
                                                                   const EquationSpec& eq) {
    if (eq.variant == EquationVariant::PhysicalNLS)
        throw std::invalid_argument("monitored_functional: defined for the weighted variants only");
    const double al = eq.exponents.alpha;
    const double p = eq.exponents.p;
    std::vector<std::pair<double, double>> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        const double lpterm = std::pow(r.lp2_norm, p + 2.0);
        double m;
        if (eq.variant == EquationVariant::PseudoConformal) {
            const double grad2 = r.h1_norm * r.h1_norm - r.mass;
            m = std::pow(r.time, al) * grad2 + 2.0 / (p + 2.0) * lpterm;
        } else {
            m = std::pow(std::cos(2.0 * r.time), al) * r.sigma_norm * r.sigma_norm + lpterm / (p + 2.0);
        }
        out.emplace_back(r.time, m);
    }
    return out;
}

} // namespace nlslab
