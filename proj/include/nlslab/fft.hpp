#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <vector>

namespace nlslab::detail {

using cdouble = std::complex<double>;

// Twiddle table e^{-i 2 pi j / n}, j < n/2, cached per thread.
inline const std::vector<cdouble>& twiddle_table(std::size_t n) {
    thread_local std::map<std::size_t, std::vector<cdouble>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cdouble> tw(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
        tw[j] = cdouble(std::cos(ang), std::sin(ang));
    }
    return cache.emplace(n, std::move(tw)).first->second;
}

/// In-place iterative radix-2 DFT, no normalization.
/// sign = -1: X_q = sum_j a_j e^{-2 pi i j q / n};  sign = +1: conjugate kernel.
inline void fft_pow2(cdouble* a, std::size_t n, int sign) {
    if (n < 2) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = twiddle_table(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cdouble w = tw[k * step];
                if (sign > 0) w = std::conj(w);
                cdouble u = a[base + k];
                cdouble v = a[base + k + half] * w;
                a[base + k] = u + v;
                a[base + k + half] = u - v;
            }
        }
    }
}

} // namespace nlslab::detail
