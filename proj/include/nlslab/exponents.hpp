#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nlslab {

/// Nonlinearity regimes of |u|^p u in dimension n, split at p = 2/n and 4/n.
enum class Regime { LongRange, ShortRangeMassSubcritical, MassCritical, MassSupercritical };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::LongRange: return "LongRange";
        case Regime::ShortRangeMassSubcritical: return "ShortRangeMassSubcritical";
        case Regime::MassCritical: return "MassCritical";
        case Regime::MassSupercritical: return "MassSupercritical";
    }
    return "?";
}

/// Weight exponent alpha(n,p) = 2 - n p / 2 of the singular factors t^{-alpha}
/// and cos(2t)^{-alpha}.
inline double alpha_exponent(int n, double p) { return 2.0 - 0.5 * n * p; }

/// Threshold exponent p_n = (2 - n + sqrt(n^2 + 12n + 4)) / (2n),
/// the larger root of n x^2 + (n-2) x - 4.
inline double p_threshold(int n) {
    if (n < 1) throw std::invalid_argument("p_threshold: n must be >= 1");
    const double nd = static_cast<double>(n);
    return (2.0 - nd + std::sqrt(nd * nd + 12.0 * nd + 4.0)) / (2.0 * nd);
}

struct ExponentData {
    int n = 1;
    double p = 0.0;
    double alpha = 0.0;
    Regime regime = Regime::LongRange;
    double p_threshold = 0.0;
};

inline ExponentData classify_exponent(int n, double p) {
    if (n < 1) throw std::invalid_argument("classify_exponent: n must be >= 1");
    if (!(p > 0.0)) throw std::invalid_argument("classify_exponent: p must be positive");
    ExponentData e;
    e.n = n;
    e.p = p;
    e.alpha = alpha_exponent(n, p);
    e.p_threshold = p_threshold(n);
    const double np = p * n; // boundaries p = 2/n, 4/n <=> n p = 2, 4
    if (np <= 2.0)
        e.regime = Regime::LongRange;
    else if (np < 4.0)
        e.regime = Regime::ShortRangeMassSubcritical;
    else if (np == 4.0)
        e.regime = Regime::MassCritical;
    else
        e.regime = Regime::MassSupercritical;
    return e;
}

/// Exact-rational overload: p = p_num / p_den. Boundary comparisons are done
/// in integer arithmetic, so p = 4/3 in n = 3 classifies as MassCritical
/// without any rounding concern.
inline ExponentData classify_exponent(int n, std::int64_t p_num, std::int64_t p_den) {
    if (p_den <= 0 || p_num <= 0) throw std::invalid_argument("classify_exponent: rational p must be positive");
    ExponentData e = classify_exponent(n, static_cast<double>(p_num) / static_cast<double>(p_den));
    const std::int64_t lhs = p_num * n;
    if (lhs <= 2 * p_den)
        e.regime = Regime::LongRange;
    else if (lhs < 4 * p_den)
        e.regime = Regime::ShortRangeMassSubcritical;
    else if (lhs == 4 * p_den)
        e.regime = Regime::MassCritical;
    else
        e.regime = Regime::MassSupercritical;
    return e;
}

} // namespace nlslab
