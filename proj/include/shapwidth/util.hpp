#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace shapwidth {

/// Kahan-compensated accumulator. Used wherever many terms of mixed sign
/// are folded into one double (per-point Shapley accumulators, level sums).
class KahanSum {
public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Deterministic 64-bit generator used by every stochastic component.
using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
    // 53 random bits -> [0,1); identical across platforms, unlike
    // std::uniform_real_distribution.
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on pinned uniforms, so seeded runs are
/// bit-reproducible regardless of the standard library.
class NormalSampler {
public:
    double operator()(Rng& rng) {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform01(rng);
        } while (u1 <= 0.0);
        double u2 = uniform01(rng);
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

private:
    bool have_ = false;
    double spare_ = 0.0;
};

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

} // namespace shapwidth
