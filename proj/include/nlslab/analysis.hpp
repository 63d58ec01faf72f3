#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "nlslab/diagnostics.hpp"
#include "nlslab/exponents.hpp"
#include "nlslab/propagators.hpp"
#include "nlslab/transforms.hpp"

namespace nlslab {

// ---------------------------------------------------------------------------
// scattering-state extraction
// ---------------------------------------------------------------------------

/// States phi(T) = e^{-iT Delta} u(T) for a list of trajectory snapshots,
/// with the pairwise H^s Cauchy table. The sequence is Cauchy iff the
/// consecutive increments die out; `strictly_decreasing` and the trend
/// fraction summarize that.
struct ExtractionResult {
    std::vector<double> times;
    std::vector<WaveField> states;
    std::vector<std::vector<double>> cauchy_table; // symmetric, zero diagonal
    std::vector<double> increments;                // consecutive H^s distances
    bool strictly_decreasing = false;
    double decreasing_fraction = 0.0; // fraction of consecutive increment pairs that decrease
    double final_increment = 0.0;
    double sobolev_index = 0.0;
};

inline ExtractionResult extract_scattering_state(const std::vector<std::pair<double, WaveField>>& snapshots,
                                                 double s) {
    if (snapshots.size() < 2) throw std::invalid_argument("extract_scattering_state: need at least two snapshots");
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("extract_scattering_state: s must lie in [0, 1]");
    ExtractionResult r;
    r.sobolev_index = s;
    for (const auto& [T, u] : snapshots) {
        // under-resolved states make every distance below meaningless
        Spectrum sp = forward_transform(u);
        double top = 0.0, tot = 0.0;
        const double half_nyq = u.grid.k_max() / 2.0;
        for (std::size_t i = 0; i < sp.coefficients.size(); ++i) {
            double a = std::norm(sp.coefficients[i]);
            tot += a;
            auto kv = u.grid.k_vec(i);
            if (std::abs(kv[0]) >= half_nyq || std::abs(kv[1]) >= half_nyq) top += a;
        }
        if (tot > 0.0 && top / tot >= 1e-6)
            throw resolution_error("extract_scattering_state: snapshot at T = " + std::to_string(T) +
                                   " fails the wavenumber-octave audit");
        r.times.push_back(T);
        r.states.push_back(free_flow(u, -T));
    }
    const std::size_t n = r.states.size();
    r.cauchy_table.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            r.cauchy_table[i][j] = r.cauchy_table[j][i] = hs_norm(r.states[i] - r.states[j], s);
    for (std::size_t i = 0; i + 1 < n; ++i) r.increments.push_back(r.cauchy_table[i][i + 1]);
    r.strictly_decreasing = true;
    std::size_t dec = 0;
    for (std::size_t i = 0; i + 1 < r.increments.size(); ++i) {
        if (r.increments[i + 1] < r.increments[i])
            ++dec;
        else
            r.strictly_decreasing = false;
    }
    r.decreasing_fraction = r.increments.size() > 1
                                ? static_cast<double>(dec) / static_cast<double>(r.increments.size() - 1)
                                : 1.0;
    r.final_increment = r.increments.empty() ? 0.0 : r.increments.back();
    return r;
}

/// || (|x|/t) (u(t) - e^{it Delta} phi_plus) ||_{L^2}; vanishing of this as
/// t -> infty is equivalent to phi_plus having finite variance.
inline double weighted_distance(const WaveField& u, const WaveField& phi_plus, double t) {
    if (t == 0.0) throw std::invalid_argument("weighted_distance: t must be nonzero");
    check_same_grid(u.grid, phi_plus.grid);
    WaveField diff = u - free_flow(phi_plus, t);
    return std::sqrt(second_moment(diff)) / std::abs(t);
}

// ---------------------------------------------------------------------------
// Fourier identity between the scattering state and the pseudo-conformal limit
// ---------------------------------------------------------------------------

struct IdentityResidual {
    double residual = 0.0;
    bool degenerate = false; // both sides vanish
};

/// Relative L^2 residual of  phi_plus^(xi) = (2i)^{n/2} conj(w_plus)(2 xi).
/// The left side is the spectrum of phi_plus on its wavenumber lattice; the
/// right side reads w_plus through band-limited interpolation at 2 xi.
inline IdentityResidual identity_51_residual(const WaveField& phi_plus, const WaveField& w_plus) {
    const int n = phi_plus.grid.dim();
    if (w_plus.grid.dim() != n) throw std::invalid_argument("identity_51_residual: dimension mismatch");
    Spectrum lhs = forward_transform(phi_plus);
    const Grid xi_grid = dual_grid(phi_plus.grid);
    WaveField rhs_samples = resample_scaled(w_plus, 2.0, xi_grid);
    const cdouble amp = std::pow(cdouble(0.0, 2.0), 0.5 * n);
    double num = 0.0, den = 0.0, den_rhs = 0.0;
    for (std::size_t i = 0; i < lhs.coefficients.size(); ++i) {
        cdouble rhs = amp * std::conj(rhs_samples.values[i]);
        num += std::norm(lhs.coefficients[i] - rhs);
        den += std::norm(lhs.coefficients[i]);
        den_rhs += std::norm(rhs);
    }
    IdentityResidual out;
    if (den <= 0.0 && den_rhs <= 0.0) {
        out.degenerate = true;
        return out;
    }
    out.residual = std::sqrt(num / std::max(den, std::numeric_limits<double>::min()));
    return out;
}

// ---------------------------------------------------------------------------
// lens dichotomy quantity and the appendix root lemma
// ---------------------------------------------------------------------------

namespace detail {

// Adaptive Simpson on [a, b] for a smooth integrand.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace detail

/// Tail integral \int_t^{pi/4} cos(2 tau)^{-beta} dtau (integrable iff beta < 1).
/// The endpoint singularity is removed by the substitution
/// h = z^{1/(1-beta)} of the distance h = pi/4 - tau.
inline double lens_tail_integral(double t, double beta) {
    const double quarter = std::numbers::pi / 4.0;
    if (!(t < quarter)) return 0.0;
    if (beta >= 1.0)
        throw std::domain_error("lens_tail_integral: divergent tail (cos exponent beta = " + std::to_string(beta) +
                                " >= 1)");
    const double H = quarter - t;
    if (beta <= 0.0) {
        return detail::integrate([beta](double h) { return std::pow(std::sin(2.0 * h), -beta); }, 0.0, H);
    }
    const double e = 1.0 / (1.0 - beta);
    const double Z = std::pow(H, 1.0 - beta);
    auto g = [beta, e](double z) {
        if (z <= 0.0) return std::pow(2.0, -beta) * e; // limit value at z = 0
        const double h = std::pow(z, e);
        return std::pow(std::sin(2.0 * h), -beta) * e * std::pow(z, e - 1.0);
    };
    return detail::integrate(g, 0.0, Z);
}

/// Quantity of the scattering/blowup alternative:
///   ||v(t)||_Sigma^p * ( \int_t^{pi/4} cos(2 tau)^{-4 alpha/(4-p(n-2))} dtau )^{(4-p(n-2))/4}.
/// Requires p > 4/(n+2) (integrable tail); in n <= 2 there is no upper
/// constraint from p < 4/(n-2).
inline double dichotomy_quantity(const WaveField& v, double t, const ExponentData& exp) {
    if (!(t < std::numbers::pi / 4.0)) throw std::invalid_argument("dichotomy_quantity: t must be < pi/4");
    const double denom = 4.0 - exp.p * (exp.n - 2);
    if (!(denom > 0.0)) throw std::domain_error("dichotomy_quantity: p out of range (4 - p(n-2) <= 0)");
    const double beta = 4.0 * exp.alpha / denom;
    const double tail = lens_tail_integral(t, beta);
    return std::pow(sigma_norm(v), exp.p) * std::pow(tail, denom / 4.0);
}

/// Structure of the sublevel set {f <= 0} for f(s) = s - a - b s^{1+p}.
/// Below the threshold a b^{1/p} < (p+1)^{-1/p} - (p+1)^{-1-1/p} the set
/// splits as [0, c] u [d, inf); at or above it the function never becomes
/// positive and no gap exists (a valid outcome, not an error).
struct SublevelStructure {
    bool threshold_ok = false;
    double s_bar = 0.0; // location of the unique maximum
    std::optional<double> c;
    std::optional<double> d;
};

inline SublevelStructure sublevel_structure(double a, double b, double p) {
    if (a < 0.0 || !(b > 0.0) || !(p > 0.0))
        throw std::invalid_argument("sublevel_structure: need a >= 0, b > 0, p > 0");
    SublevelStructure out;
    out.s_bar = std::pow((p + 1.0) * b, -1.0 / p);
    const double margin = std::pow(p + 1.0, -1.0 / p) - std::pow(p + 1.0, -1.0 - 1.0 / p);
    out.threshold_ok = a * std::pow(b, 1.0 / p) < margin;
    if (!out.threshold_ok) return out;

    auto f = [a, b, p](double s) { return s - a - b * std::pow(s, 1.0 + p); };
    auto fp = [b, p](double s) { return 1.0 - b * (1.0 + p) * std::pow(s, p); };
    auto polish = [&](double s) {
        for (int it = 0; it < 4; ++it) {
            double d = fp(s);
            if (d == 0.0) break;
            double step = f(s) / d;
            if (!std::isfinite(step)) break;
            s -= step;
        }
        return s;
    };
    auto bisect = [&](double lo, double hi, bool rising) {
        for (int it = 0; it < 200 && (hi - lo) > 1e-15 * (1.0 + hi); ++it) {
            double mid = 0.5 * (lo + hi);
            bool pos = f(mid) > 0.0;
            if (pos == rising)
                hi = mid;
            else
                lo = mid;
        }
        return 0.5 * (lo + hi);
    };

    if (a == 0.0) {
        out.c = 0.0; // f(0) = 0 exactly
    } else {
        out.c = polish(bisect(0.0, out.s_bar, true));
    }
    double hi = std::max(2.0 * out.s_bar, 1.0);
    while (f(hi) > 0.0) hi *= 2.0;
    out.d = polish(bisect(out.s_bar, hi, false));
    return out;
}

// ---------------------------------------------------------------------------
// rate fitting and endpoint extrapolation
// ---------------------------------------------------------------------------

struct RateFit {
    double slope = 0.0;
    double stderr_slope = 0.0; // standard error of the slope
    double intercept = 0.0;
};

/// Least-squares slope of log(value) against log(time) with its standard
/// error. Needs >= 5 strictly positive samples.
inline RateFit rate_fit(const std::vector<std::pair<double, double>>& series) {
    if (series.size() < 5) throw std::invalid_argument("rate_fit: need at least 5 samples");
    std::vector<double> xs, ys;
    for (const auto& [t, v] : series) {
        if (!(t > 0.0) || !(v > 0.0)) throw std::invalid_argument("rate_fit: samples must be strictly positive");
        xs.push_back(std::log(t));
        ys.push_back(std::log(v));
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    RateFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.stderr_slope = std::sqrt(ss_res / (n - 2.0) / sxx);
    return fit;
}

struct RichardsonLimit {
    WaveField limit;
    double contraction = 0.0; // measured ratio q between successive differences
    double tolerance = 0.0;   // size of the applied correction (last increment estimate)
};

/// Endpoint limit of a geometric sequence of field snapshots (ratio-2 times):
/// assumes A_k ~ A_inf + C q^k, measures q from the last three snapshots and
/// extrapolates A_inf = A_2 + (A_2 - A_1) q/(1-q).
inline RichardsonLimit richardson_limit(const std::vector<WaveField>& snapshots) {
    if (snapshots.size() < 3) throw std::invalid_argument("richardson_limit: need at least 3 snapshots");
    const WaveField& a0 = snapshots[snapshots.size() - 3];
    const WaveField& a1 = snapshots[snapshots.size() - 2];
    const WaveField& a2 = snapshots[snapshots.size() - 1];
    const double d01 = l2_distance(a1, a0);
    const double d12 = l2_distance(a2, a1);
    RichardsonLimit out{a2, 0.0, d12};
    if (d01 <= 0.0 || d12 <= 0.0) return out; // already converged
    const double q = d12 / d01;
    out.contraction = q;
    if (q >= 1.0) return out; // not contracting; return last snapshot, tolerance = last diff
    const double gain = q / (1.0 - q);
    WaveField corr = a2;
    for (std::size_t i = 0; i < corr.values.size(); ++i)
        corr.values[i] = a2.values[i] + (a2.values[i] - a1.values[i]) * gain;
    out.limit = std::move(corr);
    out.tolerance = d12 * gain;
    return out;
}

} // namespace nlslab
