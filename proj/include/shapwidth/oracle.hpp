#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "shapwidth/errors.hpp"
#include "shapwidth/geometry.hpp"
#include "shapwidth/hull3d.hpp"
#include "shapwidth/result.hpp"
#include "shapwidth/util.hpp"

namespace shapwidth {

/// Probability that all of a set A (|A| = a) appears before x and all of a
/// disjoint set B (|B| = b) appears after x in a uniformly random
/// permutation: a! b! / (a+b+1)!.
inline double perm_probability(int a, int b) {
    double res = 1.0;
    for (int i = 1; i <= b; ++i) {
        res *= static_cast<double>(i) / static_cast<double>(a + i);
    }
    return res / static_cast<double>(a + b + 1);
}

struct Permutation {
    std::vector<int> order;

    static Permutation random(int n, Rng& rng) {
        Permutation p;
        p.order.resize(static_cast<std::size_t>(n));
        std::iota(p.order.begin(), p.order.end(), 0);
        for (int i = n - 1; i > 0; --i) {
            const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
            std::swap(p.order[static_cast<std::size_t>(i)], p.order[static_cast<std::size_t>(j)]);
        }
        return p;
    }

    /// Players appearing strictly before position i.
    std::vector<int> prefix(int i) const {
        return {order.begin(), order.begin() + i};
    }
};

struct MonteCarloEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Monte-Carlo mean width: average directional width over uniform random
/// directions (a triple of standard normals, normalized).
inline MonteCarloEstimate mc_mean_width(const std::vector<Point3>& pts, std::uint64_t samples,
                                        std::uint64_t seed) {
    Rng rng(seed);
    NormalSampler normal;
    KahanSum sum, sumsq;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Point3 u;
        double n2 = 0.0;
        do {
            u = {normal(rng), normal(rng), normal(rng)};
            n2 = dot(u, u);
        } while (n2 <= 1e-30);
        u = u * (1.0 / std::sqrt(n2));
        const double w = directional_width(pts, u);
        sum.add(w);
        sumsq.add(w * w);
    }
    MonteCarloEstimate est;
    est.samples = samples;
    est.seed = seed;
    est.value = sum.value() / static_cast<double>(samples);
    const double var =
        std::max(0.0, sumsq.value() / static_cast<double>(samples) - est.value * est.value);
    est.stderr_ = samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) : 0.0;
    return est;
}

namespace detail {

/// Edge 4-tuple key (q,r,t1,t2) with q<r, t1<=t2, each index < 256.
inline std::uint32_t tuple_key(int q, int r, int t1, int t2) {
    if (q > r) std::swap(q, r);
    if (t1 > t2) std::swap(t1, t2);
    return (static_cast<std::uint32_t>(q) << 24) | (static_cast<std::uint32_t>(r) << 16) |
           (static_cast<std::uint32_t>(t1) << 8) | static_cast<std::uint32_t>(t2);
}

/// l(e)*psi(e) for every edge tuple of the hull of `subset` (global indices).
/// Flat triangles contribute their three edges as (u,v,w,w) with psi = 1/2.
inline std::map<std::uint32_t, double> edge_tuple_measures(const PointSet& ps,
                                                           const std::vector<int>& subset) {
    std::map<std::uint32_t, double> out;
    std::vector<Point3> pts;
    pts.reserve(subset.size());
    for (int i : subset) pts.push_back(ps[i]);
    const ConvexHull3 hull = hull3d(pts);
    if (hull.kind == HullKind::triangle) {
        const int a = subset[static_cast<std::size_t>(hull.vertices[0])];
        const int b = subset[static_cast<std::size_t>(hull.vertices[1])];
        const int c = subset[static_cast<std::size_t>(hull.vertices[2])];
        out[tuple_key(a, b, c, c)] = 0.5 * norm(ps[a] - ps[b]);
        out[tuple_key(b, c, a, a)] = 0.5 * norm(ps[b] - ps[c]);
        out[tuple_key(a, c, b, b)] = 0.5 * norm(ps[a] - ps[c]);
        return out;
    }
    if (hull.kind != HullKind::polyhedron) return out;
    auto opposite = [&](int face, int u, int v) {
        const HullFace& f = hull.faces[static_cast<std::size_t>(face)];
        if (f.a != u && f.a != v) return f.a;
        if (f.b != u && f.b != v) return f.b;
        return f.c;
    };
    for (const HullEdge& e : hull.edges) {
        const int t1 = opposite(e.f1, e.u, e.v);
        const int t2 = opposite(e.f2, e.u, e.v);
        const double lpsi = norm(pts[static_cast<std::size_t>(e.u)] -
                                 pts[static_cast<std::size_t>(e.v)]) *
                            exterior_angle(hull, e);
        out[tuple_key(subset[static_cast<std::size_t>(e.u)], subset[static_cast<std::size_t>(e.v)],
                      subset[static_cast<std::size_t>(t1)],
                      subset[static_cast<std::size_t>(t2)])] = lpsi;
    }
    return out;
}

/// Splits one Case-3 marginal (prefix S, arriving point p) into the removal /
/// apex / endpoint buckets of `into`, scaled by `weight`. Tuples present in
/// both hulls have identical exterior angles and cancel.
inline void bucket_case3_marginal(const PointSet& ps, const std::vector<int>& prefix, int p,
                                  double weight, ShapleyBreakdown& into) {
    const auto before = edge_tuple_measures(ps, prefix);
    std::vector<int> with = prefix;
    with.push_back(p);
    const auto after = edge_tuple_measures(ps, with);
    for (const auto& [key, lpsi] : after) {
        if (before.count(key)) continue;
        const int q = static_cast<int>(key >> 24) & 0xff;
        const int r = static_cast<int>(key >> 16) & 0xff;
        const int t1 = static_cast<int>(key >> 8) & 0xff;
        const int t2 = static_cast<int>(key) & 0xff;
        if (p == t1 || p == t2) {
            into.case3_apex += 0.5 * weight * lpsi;
        } else if (p == q || p == r) {
            into.case3_endpoint += 0.5 * weight * lpsi;
        } else {
            throw std::logic_error("case-3 bucketing: added edge tuple not incident to p");
        }
    }
    for (const auto& [key, lpsi] : before) {
        if (after.count(key)) continue;
        into.case3_removal -= 0.5 * weight * lpsi;
    }
}

} // namespace detail

constexpr int kExactShapleyLimit = 9;

/// Exact Shapley values by full enumeration: phi(p) is the expected marginal
/// mean width over all arrival orders, evaluated by summing over prefix
/// subsets with weight |S|! (n-1-|S|)! / n!. Every prefix hull is computed
/// from scratch. Guarded to n <= 9.
inline ShapleyResult exact_shapley(const PointSet& ps) {
    const int n = ps.size();
    if (n > kExactShapleyLimit) {
        throw SizeLimitError("exact_shapley limited to n <= " +
                             std::to_string(kExactShapleyLimit) + ", got n = " +
                             std::to_string(n));
    }
    ShapleyResult res;
    res.n = n;
    res.algorithm = "exact";
    res.phi.assign(static_cast<std::size_t>(n), 0.0);
    res.parts.assign(static_cast<std::size_t>(n), {});
    if (n == 0) return res;

    const std::uint32_t full = (n >= 32) ? 0xffffffffu : ((1u << n) - 1u);
    std::vector<double> v(static_cast<std::size_t>(full) + 1, 0.0);
    std::vector<std::map<std::uint32_t, double>> tuples(static_cast<std::size_t>(full) + 1);
    std::vector<int> subset;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        subset.clear();
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) subset.push_back(i);
        }
        v[mask] = [&] {
            std::vector<Point3> pts;
            for (int i : subset) pts.push_back(ps[i]);
            return mean_width_exact(pts);
        }();
        if (subset.size() >= 3) tuples[mask] = detail::edge_tuple_measures(ps, subset);
    }

    // weight(s) = s! (n-1-s)! / n!
    std::vector<double> weight(static_cast<std::size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) {
        double w = 1.0 / static_cast<double>(n);
        for (int i = 1; i <= s; ++i) {
            w *= static_cast<double>(i) / static_cast<double>(n - i);
        }
        weight[static_cast<std::size_t>(s)] = w;
    }

    std::vector<KahanSum> phi(static_cast<std::size_t>(n));
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
        const int s = std::popcount(mask);
        const double w = weight[static_cast<std::size_t>(s)];
        for (int p = 0; p < n; ++p) {
            if (mask & (1u << p)) continue;
            const double marginal = v[mask | (1u << p)] - v[mask];
            phi[static_cast<std::size_t>(p)].add(w * marginal);
            auto& parts = res.parts[static_cast<std::size_t>(p)];
            if (s == 1) {
                parts.case1 += w * marginal;
            } else if (s == 2) {
                parts.case2 += w * marginal;
            } else if (s >= 3) {
                // Bucket via the edge-tuple ledgers of the two hulls.
                const auto& before = tuples[mask];
                const auto& after = tuples[mask | (1u << p)];
                for (const auto& [key, lpsi] : after) {
                    if (before.count(key)) continue;
                    const int t1 = static_cast<int>(key >> 8) & 0xff;
                    const int t2 = static_cast<int>(key) & 0xff;
                    if (p == t1 || p == t2) {
                        parts.case3_apex += 0.5 * w * lpsi;
                    } else {
                        parts.case3_endpoint += 0.5 * w * lpsi;
                    }
                }
                for (const auto& [key, lpsi] : before) {
                    if (after.count(key)) continue;
                    parts.case3_removal -= 0.5 * w * lpsi;
                }
            }
        }
    }
    for (int p = 0; p < n; ++p) res.phi[static_cast<std::size_t>(p)] = phi[static_cast<std::size_t>(p)].value();
    return res;
}

/// Monte-Carlo Shapley estimator: each sample draws one permutation and
/// credits every point with its marginal mean width. Deterministic per seed.
inline ShapleyResult mc_shapley(const PointSet& ps, std::uint64_t samples, std::uint64_t seed) {
    const int n = ps.size();
    ShapleyResult res;
    res.n = n;
    res.algorithm = "mc";
    res.seed = seed;
    res.phi.assign(static_cast<std::size_t>(n), 0.0);
    res.parts.assign(static_cast<std::size_t>(n), {});
    res.stderrs.assign(static_cast<std::size_t>(n), 0.0);
    if (n == 0 || samples == 0) return res;

    Rng rng(seed);
    std::vector<KahanSum> sum(static_cast<std::size_t>(n)), sumsq(static_cast<std::size_t>(n));
    const double inv = 1.0 / static_cast<double>(samples);
    std::vector<int> prefix;
    std::vector<Point3> prefix_pts;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const Permutation perm = Permutation::random(n, rng);
        prefix.clear();
        prefix_pts.clear();
        double v_prev = 0.0;
        for (int k = 0; k < n; ++k) {
            const int p = perm.order[static_cast<std::size_t>(k)];
            prefix_pts.push_back(ps[p]);
            const double v_cur = mean_width_exact(prefix_pts);
            const double marginal = v_cur - v_prev;
            sum[static_cast<std::size_t>(p)].add(marginal);
            sumsq[static_cast<std::size_t>(p)].add(marginal * marginal);
            auto& parts = res.parts[static_cast<std::size_t>(p)];
            if (k == 1) {
                parts.case1 += inv * marginal;
            } else if (k == 2) {
                parts.case2 += inv * marginal;
            } else if (k >= 3) {
                detail::bucket_case3_marginal(ps, prefix, p, inv, parts);
            }
            prefix.push_back(p);
            v_prev = v_cur;
        }
    }
    for (int p = 0; p < n; ++p) {
        const auto ip = static_cast<std::size_t>(p);
        res.phi[ip] = sum[ip].value() * inv;
        const double var = std::max(0.0, sumsq[ip].value() * inv - res.phi[ip] * res.phi[ip]);
        res.stderrs[ip] = samples > 1 ? std::sqrt(var / static_cast<double>(samples - 1)) : 0.0;
    }
    return res;
}

} // namespace shapwidth
