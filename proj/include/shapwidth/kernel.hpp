#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "shapwidth/errors.hpp"

namespace shapwidth {

/// A fixed integer->real function with a declared valid window. Sampling
/// outside [lo, hi] throws KernelWindowError rather than returning garbage.
struct KernelFn {
    std::function<double(std::int64_t)> fn;
    std::int64_t lo = std::numeric_limits<std::int64_t>::min() / 4;
    std::int64_t hi = std::numeric_limits<std::int64_t>::max() / 4;

    double operator()(std::int64_t x) const {
        if (x < lo || x > hi) {
            throw KernelWindowError("kernel sampled at " + std::to_string(x) +
                                    " outside window [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
        }
        return fn(x);
    }
};

/// Permutation-probability kernel of the Case-3 sweeps:
///   arity 4:  g(i) = 4! (n-5-i)! / (n-i)!   for 0 <= i <= n-5
///   arity 3:  g(i) = 3! (n-4-i)! / (n-i)!   for 0 <= i <= n-4
/// evaluated as a reciprocal product so no factorial ever overflows.
/// Monotone nondecreasing on the valid range.
struct GFun {
    int n = 0;
    int arity = 4;

    std::int64_t max_index() const { return n - arity - 1; }

    double eval(std::int64_t i) const {
        if (i < 0 || i > max_index()) {
            throw KernelWindowError("gfun(arity " + std::to_string(arity) + ", n=" +
                                    std::to_string(n) + ") evaluated at " + std::to_string(i));
        }
        return eval_unchecked(i);
    }

    /// The raw reciprocal product; finite for any i <= n-arity-1, including
    /// negative i. Internal callers use it for the shifted sweep kernels.
    double eval_unchecked(std::int64_t i) const {
        double num = 1.0;
        for (int k = 1; k <= arity; ++k) num *= static_cast<double>(k);
        double den = 1.0;
        for (int k = 0; k <= arity; ++k) den *= static_cast<double>(n - i - k);
        return num / den;
    }
};

inline double gfun_eval(const GFun& gf, std::int64_t i) { return gf.eval(i); }

inline KernelFn gfun_kernel(const GFun& gf) {
    return KernelFn{[gf](std::int64_t i) { return gf.eval(i); }, 0, gf.max_index()};
}

/// Kernel driving the sweep queues. Queue argument x corresponds to cone
/// count W = x-1 (the head-to-query distance includes the query point
/// itself), so gamma(x) = g(x-1). Arguments past the probability-valid range
/// are zero: those terms correspond to impossible permutation events, and a
/// pure-zero tail makes the wrap-around pair cancel exactly in the S(i)
/// transition. gamma(0) = g(-1) stays on the reciprocal-product formula; it
/// only ever appears in self terms that callers subtract back out.
inline KernelFn make_sweep_kernel(int n, int arity, std::int64_t hi) {
    GFun gf{n, arity};
    const std::int64_t valid_hi = gf.max_index() + 1;
    return KernelFn{[gf, valid_hi](std::int64_t x) {
                        return x <= valid_hi ? gf.eval_unchecked(x - 1) : 0.0;
                    },
                    0, hi};
}

} // namespace shapwidth
