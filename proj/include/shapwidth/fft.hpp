#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace shapwidth {

namespace detail {

/// Twiddle table for one power-of-two size, entries exp(-2*pi*i*k/n).
inline const std::vector<std::complex<double>>& twiddles(std::size_t n) {
    thread_local std::vector<std::vector<std::complex<double>>> cache;
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    if (cache.size() <= log2n) cache.resize(log2n + 1);
    auto& tw = cache[log2n];
    if (tw.size() != n / 2) {
        tw.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            double ang = -2.0 * 3.14159265358979323846 * static_cast<double>(k) /
                         static_cast<double>(n);
            tw[k] = {std::cos(ang), std::sin(ang)};
        }
    }
    return tw;
}

/// Iterative radix-2 transform, in place. `n` must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool invert) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    const auto& tw = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> w = tw[k * step];
                if (invert) w = std::conj(w);
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
    if (invert) {
        const double inv = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv;
    }
}

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace detail

/// Full linear convolution via one complex FFT (a packed into the real part,
/// b into the imaginary part would not work for two independent inputs of
/// different length, so we do the plain three-transform variant with a and b
/// packed together as re+i*im of a single spectrum split by symmetry).
/// Reusable scratch lives in the object so hot loops do not reallocate.
class Convolver {
public:
    /// out = a (*) b, length |a|+|b|-1. Direct quadratic evaluation below the
    /// size threshold, FFT above it.
    void linear(std::span<const double> a, std::span<const double> b,
                std::vector<double>& out, std::size_t direct_threshold = 32) {
        const std::size_t na = a.size(), nb = b.size();
        out.assign(na + nb - 1, 0.0);
        if (na == 0 || nb == 0) {
            out.clear();
            return;
        }
        if (na <= direct_threshold || nb <= direct_threshold) {
            for (std::size_t i = 0; i < na; ++i) {
                const double ai = a[i];
                if (ai == 0.0) continue;
                for (std::size_t j = 0; j < nb; ++j) out[i + j] += ai * b[j];
            }
            return;
        }
        const std::size_t n = detail::next_pow2(na + nb - 1);
        buf_.assign(n, {0.0, 0.0});
        for (std::size_t i = 0; i < na; ++i) buf_[i].real(a[i]);
        for (std::size_t i = 0; i < nb; ++i) buf_[i].imag(b[i]);
        detail::fft_inplace(buf_, false);
        // Spectra of the two real inputs, recovered by conjugate symmetry,
        // multiplied pointwise: conv spectrum = A(w)*B(w).
        prod_.assign(n, {0.0, 0.0});
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t kr = (n - k) & (n - 1);
            std::complex<double> p = buf_[k];
            std::complex<double> q = std::conj(buf_[kr]);
            std::complex<double> fa = 0.5 * (p + q);
            std::complex<double> fb = std::complex<double>(0.0, -0.5) * (p - q);
            prod_[k] = fa * fb;
        }
        detail::fft_inplace(prod_, true);
        for (std::size_t i = 0; i + 1 < na + nb; ++i) out[i] = prod_[i].real();
    }

private:
    std::vector<std::complex<double>> buf_;
    std::vector<std::complex<double>> prod_;
};

/// One-shot convenience wrapper.
inline std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    Convolver c;
    std::vector<double> out;
    c.linear(a, b, out);
    return out;
}

} // namespace shapwidth
