#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "nlslab/field.hpp"

namespace nlslab {

/// Lens time reparameterization t(s) = arctan(2s)/2, mapping s in R onto
/// (-pi/4, pi/4): infinite physical time compactifies into a bounded interval.
inline double time_map(double s) { return 0.5 * std::atan(2.0 * s); }

/// Inverse map s(t) = tan(2t)/2; requires |t| < pi/4.
inline double time_map_inverse(double t) {
    if (!(std::abs(t) < std::numbers::pi / 4.0))
        throw std::invalid_argument("time_map_inverse: |t| must be < pi/4");
    return 0.5 * std::tan(2.0 * t);
}

struct ResampleAudit {
    double top_octave_fraction = 0.0;   // spectral mass with any |k_a| >= k_max/2
    double dropped_mass_fraction = 0.0; // source mass invisible to the sampled window
};

struct ResampleLimits {
    double top_octave_tol = 1e-6;
    double mass_tol = 1e-8;
    bool enforce = true;
};

/// Band-limited evaluation of `src` at the points scale*x for x on `target`:
/// out(x) = sum_m src^(k_m) e^{i k_m . (scale x)} dk^n / (2 pi)^{n/2}.
///
/// Chirped fields must be rescaled before chirp multiplication, never after;
/// the audit rejects inputs whose top wavenumber octave carries mass
/// (silent aliasing would corrupt every identity built on top) and flags
/// rescalings whose sample window drops or wraps source support.
inline WaveField resample_scaled(const WaveField& src, double scale, const Grid& target,
                                 ResampleAudit* audit_out = nullptr, const ResampleLimits& lim = {}) {
    if (!(scale > 0.0)) throw std::invalid_argument("resample_scaled: scale must be positive");
    if (target.dim() != src.grid.dim()) throw std::invalid_argument("resample_scaled: dimension mismatch");

    const Grid& gs = src.grid;
    Spectrum spec = forward_transform(src);

    ResampleAudit audit;
    {
        double top = 0.0, tot = 0.0;
        const double half_nyq = gs.k_max() / 2.0;
        for (std::size_t i = 0; i < spec.coefficients.size(); ++i) {
            double a = std::norm(spec.coefficients[i]);
            tot += a;
            auto kv = gs.k_vec(i);
            if (std::abs(kv[0]) >= half_nyq || std::abs(kv[1]) >= half_nyq) top += a;
        }
        audit.top_octave_fraction = tot > 0.0 ? top / tot : 0.0;
    }
    {
        // Evaluation clamps to the source box (samples beyond it read zero,
        // never the periodic images), so the window actually seen per axis is
        // min(scale*L_target, L_source); mass outside that box is invisible.
        const double window = std::min(scale * target.half_width(), gs.half_width());
        double outside = 0.0, tot = 0.0;
        for (std::size_t i = 0; i < src.values.size(); ++i) {
            double a = std::norm(src.values[i]);
            tot += a;
            auto xv = gs.x_vec(i);
            if (std::abs(xv[0]) > window || std::abs(xv[1]) > window) outside += a;
        }
        if (tot > 0.0) audit.dropped_mass_fraction = outside / tot;
    }
    if (audit_out) *audit_out = audit;
    if (lim.enforce) {
        if (audit.top_octave_fraction >= lim.top_octave_tol)
            throw resolution_error("resample_scaled: top-octave spectral mass fraction " +
                                   std::to_string(audit.top_octave_fraction) + " exceeds audit tolerance");
        if (audit.dropped_mass_fraction > lim.mass_tol)
            throw resample_error("resample_scaled: source support extends past the sampled window (mass fraction " +
                                 std::to_string(audit.dropped_mass_fraction) + ")");
    }

    const int ns = gs.points_per_axis();
    const int nt = target.points_per_axis();
    const double dks = gs.dk();

    // per-axis evaluation: for target index j, contract against e^{i k_m y_j},
    // phases built by recurrence with periodic exact refresh
    auto eval_axis = [&](const std::vector<cdouble>& in, std::vector<cdouble>& out, int lines_n,
                         std::size_t in_stride_axis, std::size_t out_stride_axis, std::size_t in_stride_line,
                         std::size_t out_stride_line) {
        std::vector<cdouble> phases(static_cast<std::size_t>(ns));
        for (int j = 0; j < nt; ++j) {
            const double y = scale * target.x(j);
            if (std::abs(y) > gs.half_width()) {
                // outside the source box: compactly-supported reading, not the
                // periodic image (the audit bounds the mass ignored this way)
                for (int line = 0; line < lines_n; ++line)
                    out[static_cast<std::size_t>(line) * out_stride_line +
                        static_cast<std::size_t>(j) * out_stride_axis] = cdouble(0.0, 0.0);
                continue;
            }
            const double dph = dks * y;
            const double ph0 = -dks * (ns / 2) * y;
            cdouble rot(std::cos(dph), std::sin(dph));
            cdouble cur(std::cos(ph0), std::sin(ph0));
            for (int m = 0; m < ns; ++m) {
                if ((m & 511) == 0) {
                    double ph = ph0 + dph * m;
                    cur = cdouble(std::cos(ph), std::sin(ph));
                }
                phases[static_cast<std::size_t>(m)] = cur;
                cur *= rot;
            }
            for (int line = 0; line < lines_n; ++line) {
                cdouble acc(0.0, 0.0);
                const cdouble* inp = in.data() + static_cast<std::size_t>(line) * in_stride_line;
                for (int m = 0; m < ns; ++m) acc += inp[static_cast<std::size_t>(m) * in_stride_axis] * phases[static_cast<std::size_t>(m)];
                out[static_cast<std::size_t>(line) * out_stride_line + static_cast<std::size_t>(j) * out_stride_axis] = acc;
            }
        }
    };

    const double unitary = std::pow(dks / std::sqrt(2.0 * std::numbers::pi), gs.dim());
    WaveField out(target, src.time_tag);
    if (gs.dim() == 1) {
        eval_axis(spec.coefficients, out.values, 1, 1, 1, 0, 0);
        for (auto& v : out.values) v *= unitary;
    } else {
        // pass 1 contracts m1, lines indexed by m0: tmp[j1*ns + m0]
        std::vector<cdouble> tmp(static_cast<std::size_t>(ns) * static_cast<std::size_t>(nt));
        eval_axis(spec.coefficients, tmp, ns, static_cast<std::size_t>(ns), static_cast<std::size_t>(ns), 1, 1);
        // pass 2 contracts m0, lines indexed by j1: out[j1*nt + j0]
        eval_axis(tmp, out.values, nt, 1, 1, static_cast<std::size_t>(ns), static_cast<std::size_t>(nt));
        for (auto& v : out.values) v *= unitary;
    }
    return out;
}

/// Pseudo-conformal transform (positive branch): for u sampled at time s > 0,
///   w(t, x) = t^{-n/2} conj(u(s, x/t)) e^{i|x|^2/(4t)},  t = 1/s.
/// Realized as band-limited rescaling followed by the chirp; an L^2 isometry.
/// The negative branch is reached by conjugation symmetry and is not
/// duplicated here.
inline WaveField pseudo_conformal_transform(const WaveField& u, double s, const Grid& target,
                                            ResampleAudit* audit = nullptr) {
    if (!(s > 0.0)) throw std::invalid_argument("pseudo_conformal_transform: s must be positive");
    const double t = 1.0 / s;
    const int n = u.grid.dim();
    WaveField g = resample_scaled(u, s, target, audit);
    const double amp = std::pow(s, 0.5 * n); // t^{-n/2}
    WaveField w(target, t);
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        double ph = target.x_sq(i) / (4.0 * t);
        w.values[i] = amp * std::conj(g.values[i]) * cdouble(std::cos(ph), std::sin(ph));
    }
    return w;
}

/// Lens transform L_t G(x) = cos(2t)^{-n/2} G(x/cos 2t) e^{-i|x|^2 tan(2t)/2},
/// |t| < pi/4. An L^2 isometry; inverse below.
inline WaveField lens_apply(const WaveField& G, double t, ResampleAudit* audit = nullptr) {
    if (!(std::abs(t) < std::numbers::pi / 4.0)) throw std::invalid_argument("lens_apply: |t| must be < pi/4");
    if (t == 0.0) return G;
    const double c = std::cos(2.0 * t);
    const double T = std::tan(2.0 * t);
    const int n = G.grid.dim();
    WaveField g = resample_scaled(G, 1.0 / c, G.grid, audit);
    const double amp = std::pow(c, -0.5 * n);
    WaveField out(G.grid, G.time_tag);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        double ph = -0.5 * G.grid.x_sq(i) * T;
        out.values[i] = amp * g.values[i] * cdouble(std::cos(ph), std::sin(ph));
    }
    return out;
}

/// Exact inverse of lens_apply: G(y) = cos(2t)^{n/2} F(cos(2t) y) e^{+i|cos(2t) y|^2 tan(2t)/2}.
/// The chirp is removed before rescaling so the resampler sees a smooth field.
inline WaveField lens_invert(const WaveField& F, double t, ResampleAudit* audit = nullptr) {
    if (!(std::abs(t) < std::numbers::pi / 4.0)) throw std::invalid_argument("lens_invert: |t| must be < pi/4");
    if (t == 0.0) return F;
    const double c = std::cos(2.0 * t);
    const double T = std::tan(2.0 * t);
    const int n = F.grid.dim();
    WaveField smooth(F.grid, F.time_tag);
    for (std::size_t i = 0; i < smooth.values.size(); ++i) {
        double ph = 0.5 * F.grid.x_sq(i) * T;
        smooth.values[i] = F.values[i] * cdouble(std::cos(ph), std::sin(ph));
    }
    WaveField g = resample_scaled(smooth, c, F.grid, audit);
    const double amp = std::pow(c, 0.5 * n);
    for (auto& v : g.values) v *= amp;
    return g;
}

/// Dispersive asymptotic profile of a free wave,
///   (2it)^{-n/2} e^{i|x|^2/(4t)} h^(x/(2t)),
/// with (2it)^{-n/2} on the principal branch (continuous in t > 0, value 1 at
/// the identity point). ||profile||_{L^2} = ||h^||_{L^2}.
inline WaveField mdfm_profile(const WaveField& phi_hat, double t, const Grid& target,
                              ResampleAudit* audit = nullptr) {
    if (t == 0.0) throw std::invalid_argument("mdfm_profile: t must be nonzero");
    const int n = phi_hat.grid.dim();
    WaveField g = resample_scaled(phi_hat, 1.0 / (2.0 * t), target, audit);
    const cdouble amp = std::pow(cdouble(0.0, 2.0 * t), -0.5 * n);
    WaveField out(target, t);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        double ph = target.x_sq(i) / (4.0 * t);
        out.values[i] = amp * g.values[i] * cdouble(std::cos(ph), std::sin(ph));
    }
    return out;
}

/// Convenience overload taking the spectrum of phi directly; the profile
/// lives on the spectrum's own physical grid.
inline WaveField mdfm_profile(const Spectrum& phi_hat, double t, ResampleAudit* audit = nullptr) {
    return mdfm_profile(spectrum_as_field(phi_hat), t, phi_hat.grid, audit);
}

} // namespace nlslab
