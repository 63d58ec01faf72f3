#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlslab/analysis.hpp"
#include "nlslab/config.hpp"
#include "nlslab/diagnostics.hpp"
#include "nlslab/field_io.hpp"
#include "nlslab/initial_data.hpp"
#include "nlslab/manifest.hpp"
#include "nlslab/propagators.hpp"
#include "nlslab/transforms.hpp"

namespace nlslab {

// ---------------------------------------------------------------------------
// scenario context: config access, file registry, verdict bookkeeping
// ---------------------------------------------------------------------------

struct ScenarioCtx {
    Config cfg;
    std::filesystem::path out_dir;
    bool quiet = false;
    RunManifest manifest;
    nlohmann::json report;

    void say(const std::string& line) const {
        if (!quiet) std::fputs((line + "\n").c_str(), stdout);
    }

    Grid grid(const std::string& prefix = "grid") const {
        return Grid::make(cfg.get_int(prefix + ".dim", 1), cfg.get_int(prefix + ".points"),
                          cfg.get_double(prefix + ".half_width"));
    }

    ExponentData exponents(const std::string& key = "exponent.p") const {
        const int n = cfg.get_int("exponent.n", cfg.get_int("grid.dim", 1));
        if (auto rat = cfg.get_rational(key)) return classify_exponent(n, rat->first, rat->second);
        return classify_exponent(n, cfg.get_double(key));
    }

    GaussianDatum datum(const std::string& prefix = "datum") const {
        const std::string family = cfg.get_string(prefix + ".family", "gaussian");
        if (family != "gaussian")
            throw config_error("unknown datum family '" + family + "' (supported: gaussian)");
        GaussianDatum d;
        d.amplitude = cfg.get_double(prefix + ".amplitude", 1.0);
        d.width = cfg.get_double(prefix + ".width", 1.0);
        if (cfg.has(prefix + ".center")) {
            auto c = cfg.get_double_list(prefix + ".center");
            for (std::size_t i = 0; i < std::min<std::size_t>(2, c.size()); ++i) d.center[i] = c[i];
        }
        if (cfg.has(prefix + ".velocity")) {
            auto v = cfg.get_double_list(prefix + ".velocity");
            for (std::size_t i = 0; i < std::min<std::size_t>(2, v.size()); ++i) d.velocity[i] = v[i];
        }
        return d;
    }

    StepPolicy step_policy(const std::string& dt_key = "time.dt") const {
        StepPolicy p;
        p.base_dt = cfg.get_double(dt_key, 1e-3);
        p.weight_budget = cfg.get_double("time.weight_budget", 0.0);
        return p;
    }

    EvolveOptions evolve_options() const {
        EvolveOptions o;
        o.cone_radius = cfg.get_double("cone.radius", 10.0);
        o.guard_fraction = cfg.get_double("guard.fraction", 0.9);
        o.guard_tolerance = cfg.get_double("guard.tolerance", 1e-8);
        return o;
    }

    void verdict(const std::string& name, const std::string& operation, double tolerance, double value, bool pass,
                 const std::string& note = "") {
        manifest.verdicts.push_back({name, operation, tolerance, value, pass, note});
        say(std::string(pass ? "  [pass] " : "  [FAIL] ") + name + " (value " + std::to_string(value) +
            " vs tolerance " + std::to_string(tolerance) + ")");
    }

    std::filesystem::path path(const std::string& rel) const { return out_dir / rel; }

    void register_file(const std::string& rel) {
        manifest.files.push_back({rel, fnv1a64_digest(read_file_bytes((out_dir / rel).string()))});
    }

    void write_text(const std::string& rel, const std::string& content) {
        std::ofstream os(out_dir / rel);
        if (!os) throw error("cannot write " + rel);
        os << content;
        os.close();
        register_file(rel);
    }

    void write_diagnostics(const std::string& rel, const std::vector<DiagnosticRecord>& recs) {
        write_diagnostics_csv((out_dir / rel).string(), recs);
        register_file(rel);
    }

    void write_field(const std::string& rel, const WaveField& f) {
        write_field_csv((out_dir / rel).string(), f);
        register_file(rel);
    }
};

namespace detail {

// closed-form free evolution of a centered, velocity-free Gaussian datum
inline WaveField free_gaussian_oracle(const Grid& g, double A, double w, double t) {
    WaveField out(g, t);
    const cdouble a(w * w, 2.0 * t);
    const cdouble pref = A * std::pow(w, g.dim()) * std::pow(a, -0.5 * g.dim());
    for (std::size_t i = 0; i < g.size(); ++i) {
        out.values[i] = pref * std::exp(-g.x_sq(i) / (2.0 * a));
    }
    return out;
}

inline void require(bool ok, const std::string& msg) {
    if (!ok) throw config_error(msg);
}

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

// ---------------------------------------------------------------------------
// scenarios
// ---------------------------------------------------------------------------

/// free-check: exact Gaussian free-flow oracle.
inline void scenario_free_check(ScenarioCtx& ctx) {
    const Grid g = ctx.grid();
    const GaussianDatum d = ctx.datum();
    detail::require(d.center[0] == 0.0 && d.center[1] == 0.0 && d.velocity[0] == 0.0 && d.velocity[1] == 0.0,
                    "free-check: the closed-form oracle needs a centered, velocity-free Gaussian");
    const double tol = ctx.cfg.get_double("tolerances.oracle", 1e-10);
    std::vector<double> times = ctx.cfg.has("time.samples") ? ctx.cfg.get_double_list("time.samples")
                                                            : std::vector<double>{0.25, 0.5, 1.0, -1.0};
    WaveField f = gaussian_field(g, d);
    std::string csv = "t,l2_error\n";
    double worst = 0.0;
    for (double t : times) {
        WaveField u = free_flow(f, t);
        double err = l2_distance(u, detail::free_gaussian_oracle(g, d.amplitude, d.width, t));
        worst = std::max(worst, err);
        csv += detail::fmt(t) + "," + detail::fmt(err) + "\n";
    }
    ctx.write_text("oracle.csv", csv);
    ctx.report["results"]["max_l2_error"] = worst;
    ctx.verdict("gaussian_oracle_error", "free_flow vs closed-form Gaussian evolution, L2", tol, worst, worst <= tol);
}

/// conservation: mass/energy drift, dt^2 scaling of the energy drift, and
/// splitting self-convergence order for all three equation variants.
inline void scenario_conservation(ScenarioCtx& ctx) {
    const Grid g = ctx.grid();
    const ExponentData ex = ctx.exponents();
    const WaveField f0 = gaussian_field(g, ctx.datum());
    const double horizon = ctx.cfg.get_double("time.horizon", 1.0);
    StepPolicy pol = ctx.step_policy();
    EvolveOptions opts = ctx.evolve_options();
    opts.sample_times = {0.5 * horizon};

    auto eq = physical_nls(ex.n, ex.p);
    auto run = evolve(eq, f0, 0.0, horizon, pol, opts);
    ctx.write_diagnostics("diagnostics.csv", run.records);

    const double m0 = run.records.front().mass, m1 = run.records.back().mass;
    const double e0 = run.records.front().energy, e1 = run.records.back().energy;
    const double mass_tol = ctx.cfg.get_double("tolerances.mass_drift", 1e-10);
    const double energy_tol = ctx.cfg.get_double("tolerances.energy_drift", 1e-6);
    const double mass_drift = std::abs(m1 - m0) / m0;
    const double energy_drift = std::abs(e1 - e0) / e0;
    ctx.verdict("mass_drift", "evolve mass conservation, relative", mass_tol, mass_drift, mass_drift <= mass_tol);
    ctx.verdict("energy_drift", "evolve energy drift at base dt, relative", energy_tol, energy_drift,
                energy_drift <= energy_tol);

    StepPolicy half = pol;
    half.base_dt = 0.5 * pol.base_dt;
    auto run2 = evolve(eq, f0, 0.0, horizon, half, EvolveOptions{});
    const double drift2 = std::abs(run2.records.back().energy - e0) / e0;
    const double ratio = drift2 > 0.0 ? energy_drift / drift2 : 4.0;
    ctx.report["results"]["energy_drift_halving_ratio"] = ratio;
    ctx.verdict("energy_drift_dt2_scaling", "energy drift ratio under dt halving, expect 4 within 20%", 0.8,
                ratio / 4.0, ratio / 4.0 >= 0.8 && ratio / 4.0 <= 1.2);

    const double order_dt = ctx.cfg.get_double("time.order_dt", 1e-2);
    const double order_tol = ctx.cfg.get_double("tolerances.order_window", 0.1);
    struct Case {
        const char* name;
        EquationSpec eq;
        double t0, t1;
    };
    const double pi8 = std::numbers::pi / 8.0;
    std::vector<Case> cases = {{"order_physical", physical_nls(ex.n, ex.p), 0.0, 0.5},
                               {"order_pseudoconformal", pseudo_conformal_equation(ex.n, ex.p), 1.0, 0.3},
                               {"order_lens", lens_equation(ex.n, ex.p), 0.0, pi8}};
    for (const auto& c : cases) {
        auto ord = self_convergence_order(c.eq, f0, c.t0, c.t1, order_dt);
        ctx.report["results"][c.name] = ord.exact ? nlohmann::json("exact") : nlohmann::json(ord.order);
        ctx.verdict(c.name, "self_convergence_order (Richardson dt, dt/2, dt/4)", order_tol,
                    ord.exact ? 2.0 : ord.order, ord.exact || std::abs(ord.order - 2.0) <= order_tol);
    }
}

// shared: reference physical run capturing snapshots at the sample times
inline std::vector<std::pair<double, WaveField>> reference_run(ScenarioCtx& ctx, const ExponentData& ex,
                                                               const std::vector<double>& times,
                                                               std::vector<DiagnosticRecord>* records_out = nullptr,
                                                               const char* diag_name = "diagnostics.csv") {
    const Grid g = ctx.grid();
    const WaveField f0 = gaussian_field(g, ctx.datum());
    StepPolicy pol = ctx.step_policy();
    EvolveOptions opts = ctx.evolve_options();
    opts.sample_times = times;
    std::vector<std::pair<double, WaveField>> snapshots;
    opts.on_sample = [&](const WaveField& u, const DiagnosticRecord& r) {
        for (double T : times)
            if (r.time == T) snapshots.emplace_back(T, u);
    };
    auto eq = physical_nls(ex.n, ex.p);
    auto run = evolve(eq, f0, 0.0, times.back(), pol, opts);
    if (diag_name) ctx.write_diagnostics(diag_name, run.records);
    if (records_out) *records_out = run.records;
    return snapshots;
}

/// scatter-shortrange: H^1 Cauchy property of e^{-iT Delta} u(T), with the
/// lens-transformed run as an independent cross-check at matched times.
inline void scenario_scatter_shortrange(ScenarioCtx& ctx) {
    const ExponentData ex = ctx.exponents();
    detail::require(ex.regime == Regime::ShortRangeMassSubcritical,
                    "scatter-shortrange requires 2/n < p < 4/n (short-range mass-subcritical), got p = " +
                        std::to_string(ex.p) + " in n = " + std::to_string(ex.n) + " (" + regime_name(ex.regime) + ")");
    std::vector<double> times = ctx.cfg.has("time.samples") ? ctx.cfg.get_double_list("time.samples")
                                                            : std::vector<double>{10.0, 20.0, 40.0, 80.0};
    auto snapshots = reference_run(ctx, ex, times);

    const double s_index = ctx.cfg.get_double("extraction.sobolev_index", 1.0);
    auto extraction = extract_scattering_state(snapshots, s_index);

    nlohmann::json sr;
    sr["extraction_times"] = extraction.times;
    sr["cauchy_table"] = extraction.cauchy_table;
    sr["fitted_rates"] = nlohmann::json::object();
    sr["identity_residuals"] = nlohmann::json::object();
    std::vector<std::string> state_files;
    for (std::size_t i = 0; i < extraction.states.size(); ++i) {
        std::string rel = "phi_plus_T" + std::to_string(static_cast<long>(extraction.times[i])) + ".csv";
        ctx.write_field(rel, extraction.states[i]);
        state_files.push_back(rel);
    }
    sr["states"] = state_files;

    const double inc_tol = ctx.cfg.get_double("tolerances.final_increment", 1e-3);
    ctx.verdict("cauchy_increments_strictly_decreasing", "extract_scattering_state H^s increments", 1.0,
                extraction.strictly_decreasing ? 1.0 : 0.0, extraction.strictly_decreasing);
    ctx.verdict("final_increment", "extract_scattering_state final H^s increment", inc_tol, extraction.final_increment,
                extraction.final_increment <= inc_tol);
    ctx.report["results"]["increments"] = extraction.increments;

    if (ctx.cfg.get_bool("lens.enabled", true)) {
        const Grid g = ctx.grid();
        const WaveField f0 = gaussian_field(g, ctx.datum());
        auto leq = lens_equation(ex.n, ex.p);
        StepPolicy lp = ctx.step_policy();
        lp.base_dt = ctx.cfg.get_double("lens.dt", lp.base_dt);
        EvolveOptions lo = ctx.evolve_options();
        std::vector<std::pair<double, WaveField>> lens_snaps;
        for (double T : times) lo.sample_times.push_back(time_map(T));
        lo.on_sample = [&](const WaveField& v, const DiagnosticRecord& r) { lens_snaps.emplace_back(r.time, v); };
        auto lrun = evolve(leq, f0, 0.0, time_map(times.back()), lp, lo);
        ctx.write_diagnostics("lens_diagnostics.csv", lrun.records);

        // Composition consistency at matched times: v(t(s)) vs L_{t(s)} u(s)
        const double xtol = ctx.cfg.get_double("tolerances.lens_crosscheck", 5e-3);
        double worst = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double ts = time_map(times[i]);
            const WaveField* v = nullptr;
            for (const auto& [t, w] : lens_snaps)
                if (t == ts) v = &w;
            if (!v) continue;
            WaveField mapped = lens_apply(snapshots[i].second, ts);
            worst = std::max(worst, l2_distance(mapped, *v) / l2_norm(*v));
        }
        ctx.report["results"]["lens_crosscheck_rel_l2"] = worst;
        ctx.verdict("lens_crosscheck", "lens_apply(u(s), t(s)) vs lens-variant trajectory, relative L2", xtol, worst,
                    worst <= xtol);

        const double slack = ctx.cfg.get_double("tolerances.lens_monotone_slack", 1e-6);
        auto M = monitored_functional(lrun.records, leq);
        bool nonincreasing = true;
        for (std::size_t i = 1; i < M.size(); ++i)
            if (M[i].second > M[i - 1].second * (1.0 + slack)) nonincreasing = false;
        ctx.verdict("lens_monotone_functional", "monitored_functional non-increasing along the lens run", slack,
                    nonincreasing ? 0.0 : 1.0, nonincreasing);
    }

    sr["verdicts"] = nlohmann::json::object();
    for (const auto& v : ctx.manifest.verdicts) sr["verdicts"][v.name] = v.pass;
    ctx.report["scattering_report"] = sr;
}

/// longrange-contrast: the p <= 2/n run must keep its L2 Cauchy increments
/// above the floor, the short-range companion must drop below it.
inline void scenario_longrange_contrast(ScenarioCtx& ctx) {
    const ExponentData ex = ctx.exponents();
    detail::require(ex.regime == Regime::LongRange,
                    "longrange-contrast requires 0 < p <= 2/n (long-range), got p = " + std::to_string(ex.p) +
                        " in n = " + std::to_string(ex.n) + " (" + regime_name(ex.regime) + ")");
    ExponentData exc = ctx.exponents("exponent.p_contrast");
    detail::require(exc.regime == Regime::ShortRangeMassSubcritical,
                    "longrange-contrast: exponent.p_contrast must be short-range mass-subcritical");

    std::vector<double> times = ctx.cfg.has("time.samples")
                                    ? ctx.cfg.get_double_list("time.samples")
                                    : std::vector<double>{10, 20, 30, 40, 50, 60, 70, 80};
    const double floor_ratio = ctx.cfg.get_double("tolerances.increment_floor", 0.2);

    auto run_one = [&](const ExponentData& e, const std::string& datum_prefix, const char* diag) {
        const Grid g = ctx.grid();
        const WaveField f0 = gaussian_field(g, ctx.datum(datum_prefix));
        StepPolicy pol = ctx.step_policy();
        EvolveOptions opts = ctx.evolve_options();
        opts.sample_times = times;
        std::vector<std::pair<double, WaveField>> snaps;
        opts.on_sample = [&](const WaveField& u, const DiagnosticRecord& r) {
            for (double T : times)
                if (r.time == T) snaps.emplace_back(T, u);
        };
        auto run = evolve(physical_nls(e.n, e.p), f0, 0.0, times.back(), pol, opts);
        ctx.write_diagnostics(diag, run.records);
        return extract_scattering_state(snaps, 0.0); // L2 increments
    };

    auto lr = run_one(ex, "datum", "diagnostics_longrange.csv");
    auto sr = run_one(exc, "datum_contrast", "diagnostics_contrast.csv");

    auto min_ratio = [](const ExtractionResult& r) {
        double m = std::numeric_limits<double>::infinity();
        for (double d : r.increments) m = std::min(m, d / r.increments.front());
        return m;
    };
    const double lr_min = min_ratio(lr), sr_min = min_ratio(sr);
    ctx.report["results"]["longrange_increments"] = lr.increments;
    ctx.report["results"]["contrast_increments"] = sr.increments;
    ctx.verdict("longrange_no_decay", "L2 increments of the p <= 2/n run stay above floor x first", floor_ratio,
                lr_min, lr_min >= floor_ratio);
    ctx.verdict("shortrange_decay", "L2 increments of the short-range run fall below floor x first", floor_ratio,
                sr_min, sr_min < floor_ratio);
}

// shared: pseudo-conformal limit pipeline. Evolves the physical equation to
// s0, transforms to the w frame, integrates toward t -> 0+ and extrapolates.
struct PcLimitResult {
    WaveField w_plus;
    RichardsonLimit extrapolation{WaveField(Grid::make(1, 16, 1.0)), 0.0, 0.0};
    std::vector<DiagnosticRecord> records;
    EquationSpec weq;
};

inline PcLimitResult pc_limit_run(ScenarioCtx& ctx, const ExponentData& ex) {
    const Grid g = ctx.grid();
    const Grid wg = Grid::make(ctx.cfg.get_int("wgrid.dim", g.dim()), ctx.cfg.get_int("wgrid.points", 1024),
                               ctx.cfg.get_double("wgrid.half_width", 20.0 * std::numbers::pi));
    const double s0 = ctx.cfg.get_double("pc.s0", 1.0);
    const int levels = ctx.cfg.get_int("pc.levels", 6);
    detail::require(levels >= 3, "pc.levels must be >= 3 for Richardson extrapolation");

    const WaveField f0 = gaussian_field(g, ctx.datum());
    auto urun = evolve(physical_nls(ex.n, ex.p), f0, 0.0, s0, ctx.step_policy(), EvolveOptions{});
    WaveField w1 = pseudo_conformal_transform(urun.state, s0, wg);

    const double t1 = 1.0 / s0;
    std::vector<double> wtimes;
    for (int k = 0; k <= levels; ++k) wtimes.push_back(t1 / std::pow(2.0, k));
    const double tmin = wtimes.back();

    auto weq = pseudo_conformal_equation(ex.n, ex.p);
    StepPolicy wp = ctx.step_policy("pc.dt");
    EvolveOptions wo = ctx.evolve_options();
    wo.sample_times = wtimes;
    std::vector<WaveField> geo;
    wo.on_sample = [&](const WaveField& w, const DiagnosticRecord& r) {
        for (int k = levels - 2; k <= levels; ++k)
            if (r.time == wtimes[static_cast<std::size_t>(k)]) geo.push_back(w);
    };
    auto wrun = evolve(weq, w1, t1, tmin, wp, wo);

    PcLimitResult out{wrun.state, {wrun.state, 0.0, 0.0}, wrun.records, weq};
    std::reverse(geo.begin(), geo.end()); // order by decreasing distance to the endpoint
    out.extrapolation = richardson_limit(geo);
    out.w_plus = out.extrapolation.limit;
    out.w_plus.time_tag = 0.0;
    return out;
}

/// pseudoconformal-limit: boundedness of the monitored functional toward
/// t -> 0+, H^1-trend of w, and the Richardson endpoint state.
inline void scenario_pseudoconformal_limit(ScenarioCtx& ctx) {
    const ExponentData ex = ctx.exponents();
    detail::require(ex.regime == Regime::ShortRangeMassSubcritical,
                    "pseudoconformal-limit requires a short-range mass-subcritical exponent");
    auto pc = pc_limit_run(ctx, ex);
    ctx.write_diagnostics("diagnostics.csv", pc.records);
    ctx.write_field("w_plus.csv", pc.w_plus);

    auto M = monitored_functional(pc.records, pc.weq);
    double m_start = M.front().second, sup = 0.0;
    for (const auto& [t, m] : M) sup = std::max(sup, m);
    const double slack = ctx.cfg.get_double("tolerances.sup_slack", 0.10);
    ctx.report["results"]["monitored_sup"] = sup;
    ctx.report["results"]["monitored_at_start"] = m_start;
    ctx.verdict("monitored_sup_bounded", "sup_t M(t) <= M(t~1) * (1 + slack) along the w run", slack,
                sup / m_start - 1.0, sup <= m_start * (1.0 + slack));

    double g_first = 0.0, g_max = 0.0;
    for (const auto& r : pc.records) {
        double grad = std::sqrt(std::max(0.0, r.h1_norm * r.h1_norm - r.mass));
        if (g_first == 0.0) g_first = grad;
        g_max = std::max(g_max, grad);
    }
    const double bound = ctx.cfg.get_double("tolerances.grad_trend_bound", 2.0);
    ctx.verdict("grad_w_bounded_trend", "||grad w(t)|| stays bounded toward t -> 0+ (H^1-regularity proxy)", bound,
                g_max / g_first, g_max <= bound * g_first);

    ctx.report["results"]["extrapolation_contraction"] = pc.extrapolation.contraction;
    ctx.report["results"]["extrapolation_tolerance"] = pc.extrapolation.tolerance;
    ctx.verdict("endpoint_extrapolation_contracting", "richardson_limit contraction ratio < 1", 1.0,
                pc.extrapolation.contraction, pc.extrapolation.contraction < 1.0);
}

/// lens-roundtrip: Hermite eigenphase oracle, transform round trip, the lens
/// identity against the harmonic flow, and monotonicity on a nonlinear run.
inline void scenario_lens_roundtrip(ScenarioCtx& ctx) {
    const Grid g = ctx.grid();
    const ExponentData ex = ctx.exponents();

    const double t_h = ctx.cfg.get_double("hermite.t", 1.0);
    const double dt_h = ctx.cfg.get_double("hermite.dt", 1e-3);
    const double herm_tol = ctx.cfg.get_double("tolerances.hermite", 1e-6);
    {
        WaveField h0 = hermite_state(g, 0), h1 = hermite_state(g, 1);
        WaveField e0 = harmonic_flow(h0, t_h, dt_h), e1 = harmonic_flow(h1, t_h, dt_h);
        double err0 = l2_distance(e0, cdouble(std::cos(t_h), -std::sin(t_h)) * h0);
        double err1 = l2_distance(e1, cdouble(std::cos(3.0 * t_h), -std::sin(3.0 * t_h)) * h1);
        ctx.verdict("hermite_ground_phase", "harmonic_flow vs e^{-it} ground-state phase, L2", herm_tol, err0,
                    err0 <= herm_tol);
        ctx.verdict("hermite_excited_phase", "harmonic_flow vs e^{-3it} first-excited phase, L2", herm_tol, err1,
                    err1 <= herm_tol);
    }

    const WaveField phi = gaussian_field(g, ctx.datum());
    {
        const double tr = ctx.cfg.get_double("roundtrip.t", std::numbers::pi / 8.0);
        const double rttol = ctx.cfg.get_double("tolerances.roundtrip", 1e-8);
        double err = l2_distance(lens_invert(lens_apply(phi, tr), tr), phi);
        ctx.verdict("lens_roundtrip", "lens_invert(lens_apply(G,t),t) = G, L2", rttol, err, err <= rttol);
    }
    {
        std::vector<double> svals = ctx.cfg.has("lens.identity_s") ? ctx.cfg.get_double_list("lens.identity_s")
                                                                   : std::vector<double>{0.25, 0.5, 1.0};
        const double idtol = ctx.cfg.get_double("tolerances.lens_identity", 1e-5);
        const double dt_lin = ctx.cfg.get_double("lens.harmonic_dt", 1e-4);
        std::string csv = "s,t,l2_error\n";
        double worst = 0.0;
        for (double s : svals) {
            const double ts = time_map(s);
            double err = l2_distance(lens_apply(free_flow(phi, s), ts), harmonic_flow(phi, ts, dt_lin));
            worst = std::max(worst, err);
            csv += detail::fmt(s) + "," + detail::fmt(ts) + "," + detail::fmt(err) + "\n";
        }
        ctx.write_text("lens_identity.csv", csv);
        ctx.verdict("lens_identity", "L_{t(s)} e^{is Delta} phi vs harmonic_flow(phi, t(s)), L2", idtol, worst,
                    worst <= idtol);
    }
    {
        std::vector<double> dichotomy_times = ctx.cfg.has("lens.dichotomy_times")
                                                  ? ctx.cfg.get_double_list("lens.dichotomy_times")
                                                  : std::vector<double>{0.5, 0.7, 0.77};
        auto leq = lens_equation(ex.n, ex.p);
        EvolveOptions lo = ctx.evolve_options();
        lo.sample_times = dichotomy_times;
        for (double s = 0.5; s <= 8.0; s *= 2.0) lo.sample_times.push_back(time_map(s));
        std::vector<std::pair<double, double>> qseries;
        lo.on_sample = [&](const WaveField& v, const DiagnosticRecord& r) {
            for (double td : dichotomy_times)
                if (r.time == td) qseries.emplace_back(td, dichotomy_quantity(v, td, ex));
        };
        const double tend = std::max(dichotomy_times.back(), time_map(8.0)) + 1e-3;
        auto run = evolve(leq, phi, 0.0, tend, ctx.step_policy(), lo);
        ctx.write_diagnostics("lens_diagnostics.csv", run.records);
        auto M = monitored_functional(run.records, leq);
        const double slack = ctx.cfg.get_double("tolerances.lens_monotone_slack", 1e-6);
        bool ok = true;
        for (std::size_t i = 1; i < M.size(); ++i)
            if (M[i].second > M[i - 1].second * (1.0 + slack)) ok = false;
        ctx.verdict("lens_monotone_functional", "monitored_functional non-increasing along the lens run", slack,
                    ok ? 0.0 : 1.0, ok);

        bool qdec = qseries.size() >= 2;
        for (std::size_t i = 1; i < qseries.size(); ++i)
            if (qseries[i].second >= qseries[i - 1].second) qdec = false;
        nlohmann::json qj = nlohmann::json::array();
        for (auto& [t, q] : qseries) qj.push_back({{"t", t}, {"quantity", q}});
        ctx.report["results"]["dichotomy_series"] = qj;
        ctx.verdict("dichotomy_quantity_decreasing", "dichotomy_quantity decreasing toward t -> pi/4 (scattering branch)",
                    1.0, qdec ? 1.0 : 0.0, qdec);
    }
}

/// moments: renormalized variance against its scattering-state limit, and the
/// cone-exterior moment.
inline void scenario_moments(ScenarioCtx& ctx) {
    const ExponentData ex = ctx.exponents();
    detail::require(ex.regime == Regime::ShortRangeMassSubcritical,
                    "moments requires a short-range mass-subcritical exponent");
    std::vector<double> times = ctx.cfg.has("time.samples") ? ctx.cfg.get_double_list("time.samples")
                                                            : std::vector<double>{10.0, 20.0, 40.0, 80.0};
    std::vector<DiagnosticRecord> records;
    auto snapshots = reference_run(ctx, ex, times, &records);
    auto extraction = extract_scattering_state(snapshots, 1.0);
    const WaveField& phi_plus = extraction.states.back();
    ctx.write_field("phi_plus.csv", phi_plus);

    const double limit_ref = 4.0 * grad_norm_sq(phi_plus);
    std::string csv = "time,variance,limit_reference\n";
    for (const auto& r : records)
        if (r.time > 0.0) csv += detail::fmt(r.time) + "," + detail::fmt(r.renorm_variance) + "," + detail::fmt(limit_ref) + "\n";
    ctx.write_text("moments.csv", csv);

    const auto& last = records.back();
    const double ratio = last.renorm_variance / limit_ref;
    const double window = ctx.cfg.get_double("tolerances.variance_window", 0.05);
    ctx.report["results"]["variance_ratio"] = ratio;
    ctx.verdict("variance_limit", "renormalized_variance / (4 ||grad phi_plus||^2) at final time", window,
                std::abs(ratio - 1.0), ratio >= 1.0 - window && ratio <= 1.0 + window);

    const double cone_tol = ctx.cfg.get_double("tolerances.cone_fraction", 1e-4);
    const double cone_frac = last.cone_exterior / last.renorm_variance;
    ctx.verdict("cone_exterior_small", "cone_exterior_moment(R)/renormalized_variance at final time", cone_tol,
                cone_frac, cone_frac <= cone_tol);
}

/// theorem13: the weighted distance || (|x|/t)(u - e^{itD}phi_plus) || decays.
inline void scenario_theorem13(ScenarioCtx& ctx) {
    const ExponentData ex = ctx.exponents();
    detail::require(ex.regime == Regime::ShortRangeMassSubcritical,
                    "theorem13 requires a short-range mass-subcritical exponent");
    std::vector<double> times = ctx.cfg.has("time.samples") ? ctx.cfg.get_double_list("time.samples")
                                                            : std::vector<double>{10.0, 20.0, 40.0};
    const double T_ex = ctx.cfg.get_double("extraction.time", 80.0);
    std::vector<double> all = times;
    if (std::find(all.begin(), all.end(), T_ex) == all.end()) all.push_back(T_ex);
    std::sort(all.begin(), all.end());
    auto snapshots = reference_run(ctx, ex, all);

    WaveField phi_plus = free_flow(snapshots.back().second, -T_ex);
    ctx.write_field("phi_plus.csv", phi_plus);

    std::string csv = "time,weighted_distance\n";
    std::vector<double> vals;
    for (const auto& [T, u] : snapshots) {
        if (T == T_ex && times.size() < all.size()) continue; // extraction-only snapshot
        double wd = weighted_distance(u, phi_plus, T);
        vals.push_back(wd);
        csv += detail::fmt(T) + "," + detail::fmt(wd) + "\n";
    }
    ctx.write_text("wd.csv", csv);
    bool decreasing = true;
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] >= vals[i - 1]) decreasing = false;
    ctx.report["results"]["weighted_distances"] = vals;
    ctx.verdict("weighted_distance_decreasing", "weighted_distance(u(t), phi_plus, t) decreasing over samples", 1.0,
                decreasing ? 1.0 : 0.0, decreasing);
}

/// identity51: Fourier identity between the scattering state and the
/// pseudo-conformal endpoint limit.
inline void scenario_identity51(ScenarioCtx& ctx) {
    const ExponentData ex = ctx.exponents();
    detail::require(ex.regime == Regime::ShortRangeMassSubcritical,
                    "identity51 requires a short-range mass-subcritical exponent");
    const double T_ex = ctx.cfg.get_double("extraction.time", 80.0);
    auto snapshots = reference_run(ctx, ex, {T_ex});
    WaveField phi_plus = free_flow(snapshots.back().second, -T_ex);
    ctx.write_field("phi_plus.csv", phi_plus);

    auto pc = pc_limit_run(ctx, ex);
    ctx.write_field("w_plus.csv", pc.w_plus);

    auto res = identity_51_residual(phi_plus, pc.w_plus);
    const double tol = ctx.cfg.get_double("tolerances.identity_residual", 1e-2);
    nlohmann::json sr;
    sr["extraction_times"] = std::vector<double>{T_ex};
    sr["states"] = std::vector<std::string>{"phi_plus.csv"};
    sr["cauchy_table"] = nlohmann::json::array();
    sr["fitted_rates"] = nlohmann::json::object();
    sr["identity_residuals"] = {{"eq51_relative_l2", res.residual}, {"degenerate", res.degenerate}};
    ctx.verdict("identity51_residual", "identity_51_residual(phi_plus, w_plus), relative L2", tol, res.residual,
                !res.degenerate && res.residual <= tol);
    sr["verdicts"] = nlohmann::json::object();
    for (const auto& v : ctx.manifest.verdicts) sr["verdicts"][v.name] = v.pass;
    ctx.report["scattering_report"] = sr;
}

/// fk-lemma: seeded sweep of the appendix root lemma against a dense-sampling
/// oracle.
inline void scenario_fk_lemma(ScenarioCtx& ctx) {
    const int count = ctx.cfg.get_int("fk.count", 100);
    const int oracle_points = ctx.cfg.get_int("fk.oracle_points", 100000);
    const double resid_tol = ctx.cfg.get_double("tolerances.root_residual", 1e-10);
    std::mt19937 rng(static_cast<std::uint32_t>(ctx.cfg.get_int("seed", 12345)));
    std::uniform_real_distribution<double> up(0.5, 3.0), ub(-2.302585092994046, 2.302585092994046),
        uf(0.05, 0.95);

    std::string csv = "a,b,p,c,d,max_residual,misclassified\n";
    int bad = 0;
    double worst_resid = 0.0;
    for (int i = 0; i < count; ++i) {
        const double p = up(rng);
        const double b = std::exp(ub(rng));
        const double margin = std::pow(p + 1.0, -1.0 / p) - std::pow(p + 1.0, -1.0 - 1.0 / p);
        const double a = uf(rng) * margin / std::pow(b, 1.0 / p);
        auto s = sublevel_structure(a, b, p);
        auto f = [&](double x) { return x - a - b * std::pow(x, 1.0 + p); };
        if (!s.threshold_ok || !s.c || !s.d) {
            ++bad;
            continue;
        }
        const double resid = std::max(std::abs(f(*s.c)), std::abs(f(*s.d)));
        worst_resid = std::max(worst_resid, resid);
        int mis = 0;
        const double hi = 3.0 * (*s.d);
        for (int j = 0; j < oracle_points; ++j) {
            const double x = hi * (static_cast<double>(j) + 0.5) / static_cast<double>(oracle_points);
            const bool inside_pred = (x <= *s.c) || (x >= *s.d);
            const double fx = f(x);
            const bool inside_true = fx <= 0.0;
            if (inside_pred != inside_true && std::abs(fx) > 1e-9 * (1.0 + std::abs(x))) ++mis;
        }
        bad += mis > 0 ? 1 : 0;
        csv += detail::fmt(a) + "," + detail::fmt(b) + "," + detail::fmt(p) + "," + detail::fmt(*s.c) + "," +
               detail::fmt(*s.d) + "," + detail::fmt(resid) + "," + std::to_string(mis) + "\n";
    }
    ctx.write_text("fk.csv", csv);
    ctx.report["results"]["cases"] = count;
    ctx.report["results"]["max_root_residual"] = worst_resid;
    ctx.verdict("fk_sublevel_oracle", "sublevel_structure vs dense-sampling oracle, misclassified cases", 0.0,
                static_cast<double>(bad), bad == 0);
    ctx.verdict("fk_root_residual", "max |f(c)|, |f(d)| over the sweep", resid_tol, worst_resid,
                worst_resid <= resid_tol);
}

/// rates: log-log slope of the gauge-gradient deficit over the fit window.
inline void scenario_rates(ScenarioCtx& ctx) {
    const ExponentData ex = ctx.exponents();
    detail::require(ex.regime == Regime::ShortRangeMassSubcritical,
                    "rates requires a short-range mass-subcritical exponent");
    std::vector<double> times;
    if (ctx.cfg.has("time.samples")) {
        times = ctx.cfg.get_double_list("time.samples");
    } else {
        const double lo = 10.0, hi = ctx.cfg.get_double("time.horizon", 100.0);
        const int npts = 9;
        for (int i = 0; i < npts; ++i) times.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (npts - 1)));
    }
    std::vector<DiagnosticRecord> records;
    reference_run(ctx, ex, times, &records);

    std::vector<std::pair<double, double>> series;
    for (const auto& r : records)
        if (std::find(times.begin(), times.end(), r.time) != times.end()) series.emplace_back(r.time, r.gauge_deficit);
    auto fit = rate_fit(series);

    const double expected = 0.5 * ex.alpha - 1.0;
    const double window = ctx.cfg.get_double("tolerances.slope_window", 0.1);
    std::string csv = "log_time,log_deficit,fit_line\n";
    for (const auto& [t, v] : series)
        csv += detail::fmt(std::log(t)) + "," + detail::fmt(std::log(v)) + "," +
               detail::fmt(fit.intercept + fit.slope * std::log(t)) + "\n";
    ctx.write_text("rates.csv", csv);

    nlohmann::json sr;
    sr["extraction_times"] = times;
    sr["states"] = nlohmann::json::array();
    sr["cauchy_table"] = nlohmann::json::array();
    sr["fitted_rates"] = {{"gauge_deficit_slope",
                           {{"slope", fit.slope}, {"stderr", fit.stderr_slope}, {"expected", expected}}}};
    sr["identity_residuals"] = nlohmann::json::object();
    ctx.verdict("gauge_deficit_rate", "rate_fit slope of gauge_gradient_deficit vs alpha/2 - 1", window,
                std::abs(fit.slope - expected), std::abs(fit.slope - expected) <= window);
    sr["verdicts"] = nlohmann::json::object();
    for (const auto& v : ctx.manifest.verdicts) sr["verdicts"][v.name] = v.pass;
    ctx.report["scattering_report"] = sr;
}

// ---------------------------------------------------------------------------
// plot emission and the driver
// ---------------------------------------------------------------------------

/// Write a long-format plot.csv plus a plot.py script driving matplotlib; no
/// rendering happens in-process. Returns the files written.
inline std::vector<std::string> emit_plots(ScenarioCtx& ctx) {
    std::vector<std::string> written;
    std::string plot = "series,x,y\n";
    bool have = false;

    auto add_csv = [&](const std::string& rel, int xcol, std::vector<std::pair<int, std::string>> ycols) {
        std::ifstream is(ctx.path(rel));
        if (!is) return;
        std::string line;
        std::getline(is, line); // header
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::stringstream ss(line);
            std::string cell;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            for (auto& [col, name] : ycols) {
                if (col < static_cast<int>(cells.size())) {
                    plot += name + "," + cells[static_cast<std::size_t>(xcol)] + "," +
                            cells[static_cast<std::size_t>(col)] + "\n";
                    have = true;
                }
            }
        }
    };

    const std::string sc = ctx.manifest.scenario;
    if (sc == "rates")
        add_csv("rates.csv", 0, {{1, "log_deficit"}, {2, "fit_line"}});
    else if (sc == "moments")
        add_csv("moments.csv", 0, {{1, "variance"}, {2, "limit_reference"}});
    else if (sc == "free-check")
        add_csv("oracle.csv", 0, {{1, "l2_error"}});
    else if (sc == "theorem13")
        add_csv("wd.csv", 0, {{1, "weighted_distance"}});
    else
        add_csv("diagnostics.csv", 0, {{1, "mass"}, {2, "energy"}, {3, "h1"}, {8, "gauge_deficit"}});

    if (!have) {
        ctx.say("emit_plots: no plottable CSV inputs; skipping");
        return written;
    }
    ctx.write_text("plot.csv", plot);
    written.push_back("plot.csv");
    ctx.write_text("plot.py",
                   "#!/usr/bin/env python3\n"
                   "\"\"\"Render plot.csv (long format: series,x,y) with matplotlib.\"\"\"\n"
                   "import csv, collections\n"
                   "import matplotlib\n"
                   "matplotlib.use(\"Agg\")\n"
                   "import matplotlib.pyplot as plt\n\n"
                   "series = collections.defaultdict(lambda: ([], []))\n"
                   "with open(\"plot.csv\") as fh:\n"
                   "    for row in csv.DictReader(fh):\n"
                   "        xs, ys = series[row[\"series\"]]\n"
                   "        xs.append(float(row[\"x\"]))\n"
                   "        ys.append(float(row[\"y\"]))\n"
                   "for name, (xs, ys) in sorted(series.items()):\n"
                   "    plt.plot(xs, ys, marker=\"o\", label=name)\n"
                   "plt.legend()\n"
                   "plt.xlabel(\"x\")\n"
                   "plt.ylabel(\"y\")\n"
                   "plt.savefig(\"plot.png\", dpi=150)\n"
                   "print(\"wrote plot.png\")\n");
    written.push_back("plot.py");
    return written;
}

inline RunManifest run_scenario(const Config& cfg, const std::string& out_dir, bool quiet = false) {
    const auto t_start = std::chrono::steady_clock::now();
    ScenarioCtx ctx;
    ctx.cfg = cfg;
    ctx.quiet = quiet;
    ctx.out_dir = out_dir;
    std::filesystem::create_directories(ctx.out_dir);

    const std::string name = cfg.get_string("scenario");
    ctx.manifest.scenario = name;
    ctx.manifest.out_dir = out_dir;
    for (const auto& [k, v] : cfg.entries()) ctx.manifest.config_echo[k] = v;
    ctx.report["schema_version"] = kReportSchemaVersion;
    ctx.report["scenario"] = name;
    ctx.say("scenario " + name + " -> " + out_dir);

    if (name == "free-check")
        scenario_free_check(ctx);
    else if (name == "conservation")
        scenario_conservation(ctx);
    else if (name == "scatter-shortrange")
        scenario_scatter_shortrange(ctx);
    else if (name == "longrange-contrast")
        scenario_longrange_contrast(ctx);
    else if (name == "pseudoconformal-limit")
        scenario_pseudoconformal_limit(ctx);
    else if (name == "lens-roundtrip")
        scenario_lens_roundtrip(ctx);
    else if (name == "moments")
        scenario_moments(ctx);
    else if (name == "theorem13")
        scenario_theorem13(ctx);
    else if (name == "identity51")
        scenario_identity51(ctx);
    else if (name == "fk-lemma")
        scenario_fk_lemma(ctx);
    else if (name == "rates")
        scenario_rates(ctx);
    else
        throw config_error("unknown scenario '" + name + "'");

    // report.json carries results + verdicts; manifest.json the inventory
    ctx.report["verdicts"] = nlohmann::json::array();
    for (const auto& v : ctx.manifest.verdicts) ctx.report["verdicts"].push_back(verdict_json(v));
    ctx.write_text("report.json", ctx.report.dump(2) + "\n");
    emit_plots(ctx);

    ctx.manifest.timing_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    {
        std::ofstream os(ctx.path("manifest.json"));
        os << ctx.manifest.to_json().dump(2) << "\n";
    }
    ctx.say(std::string("verdicts: ") + (ctx.manifest.all_pass() ? "all pass" : "FAILURES present"));
    return ctx.manifest;
}

} // namespace nlslab
