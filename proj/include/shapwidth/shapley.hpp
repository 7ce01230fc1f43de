#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "shapwidth/geometry.hpp"
#include "shapwidth/kernel.hpp"
#include "shapwidth/result.hpp"
#include "shapwidth/sweep.hpp"
#include "shapwidth/util.hpp"

namespace shapwidth {

/// Case 1: exactly one point before p, the prefix hull becomes a segment.
/// contribution(p) = sum_{q != p} |p-q| / (2 n (n-1)).
inline std::vector<double> case1(const PointSet& ps) {
    const int n = ps.size();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (n < 2) return out;
    const double w = 1.0 / (2.0 * n * (n - 1.0));
    for (int p = 0; p < n; ++p) {
        KahanSum sum;
        for (int q = 0; q < n; ++q) {
            if (q == p) continue;
            sum.add(norm(ps[p] - ps[q]));
        }
        out[static_cast<std::size_t>(p)] = w * sum.value();
    }
    return out;
}

/// Case 2: exactly two points before p, segment grows into a triangle.
/// contribution(p) = sum over ordered distinct (q, r) of
/// (|p-q| + |p-r| - |r-q|) / (4 n (n-1) (n-2)).
inline std::vector<double> case2(const PointSet& ps) {
    const int n = ps.size();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    if (n < 3) return out;
    const double w = 1.0 / (4.0 * n * (n - 1.0) * (n - 2.0));
    for (int p = 0; p < n; ++p) {
        KahanSum sum;
        for (int q = 0; q < n; ++q) {
            if (q == p) continue;
            const double dpq = norm(ps[p] - ps[q]);
            for (int r = q + 1; r < n; ++r) {
                if (r == p) continue;
                sum.add(2.0 * (dpq + norm(ps[p] - ps[r]) - norm(ps[r] - ps[q])));
            }
        }
        out[static_cast<std::size_t>(p)] = w * sum.value();
    }
    return out;
}

struct ShapleyOptions {
    int threads = 1;
    /// Comparison-only variant that keeps diagonal (t1 = t2) pairs inside the
    /// arity-4 sums the way the paper's sweep text reads, instead of the
    /// corrected separate arity-3 degenerate-triangle term. Fails the
    /// permutation oracle; kept to document the correction.
    bool paper_literal_diagonal = false;
};

namespace detail {

/// All Case-3 quantities of one projection pair (q, r), indexed by polar
/// order position. `removal` carries the degenerate-triangle diagonal term;
/// the |q-r| factor and the global 1/2 and signs are applied by callers.
struct PairCase3 {
    PolarSweepOrder order;
    std::vector<double> removal; // sum over S(i) of psi~ g4(W), plus diagonal
    std::vector<double> apex;    // sum over neighbours of psi~ g3(W)
    double cone3 = 0.0;          // sum over unordered cone pairs of psi~ g3(W)
};

inline PairCase3 compute_pair_case3(const PointSet& ps, int q, int r, bool literal) {
    const int n = ps.size();
    PairCase3 pc{polar_order(project_along(ps, q, r)), {}, {}, 0.0};
    const int m = pc.order.size();
    pc.removal.assign(static_cast<std::size_t>(m), 0.0);
    pc.apex.assign(static_cast<std::size_t>(m), 0.0);
    if (m == 0) return pc;

    const std::int64_t window_hi = 2 * m + 8;
    const KernelFn g3k = make_sweep_kernel(n, 3, window_hi);
    const KernelFn g4k = make_sweep_kernel(n, 4, window_hi);
    const double g30 = g3k(0);
    const double g40 = g4k(0);

    const DirectionalSums right = engine_sweep(pc.order, Side::Right, g3k, g4k);
    const DirectionalSums left = engine_sweep(pc.order, Side::Left, g3k, g4k);

    // Right/left one-sided psi-weighted sums; the with-self channel sums
    // collapse so that only a constant `gamma(0)/2` correction remains.
    std::vector<double> ar4(static_cast<std::size_t>(m)), al4(static_cast<std::size_t>(m));
    KahanSum apex_total;
    for (int i = 0; i < m; ++i) {
        const auto ii = static_cast<std::size_t>(i);
        const double fr = right.lift[ii] / kTwoPi;
        const double fl = left.lift[ii] / kTwoPi;
        const double ar3 = (0.5 - fr) * right.one3[ii] + right.theta3[ii] - 0.5 * g30;
        const double al3 = (0.5 + fl) * left.one3[ii] - left.theta3[ii] - 0.5 * g30;
        pc.apex[ii] = ar3 + al3;
        apex_total.add(pc.apex[ii]);
        const double self4 = literal ? 0.0 : 0.5 * g40;
        ar4[ii] = (0.5 - fr) * right.one4[ii] + right.theta4[ii] - self4;
        al4[ii] = (0.5 + fl) * left.one4[ii] - left.theta4[ii] - self4;
    }
    pc.cone3 = 0.5 * apex_total.value();

    const InitialConeSums ics = engine_initial_cone(pc.order, g4k, literal);
    const double diag =
        literal ? 0.0 : static_cast<double>(n - 3) * 0.5 * GFun{n, 3}.eval(0);

    // S(0) from the initial sweep, then S(i+1) = S(i) + right(i) - left(i+1).
    double rem = 0.5 * ics.init11 - ics.init1th + ics.initth1;
    pc.removal[0] = rem + diag;
    for (int i = 0; i + 1 < m; ++i) {
        rem += ar4[static_cast<std::size_t>(i)] - al4[static_cast<std::size_t>(i + 1)];
        pc.removal[static_cast<std::size_t>(i + 1)] = rem + diag;
    }
    return pc;
}

} // namespace detail

/// Removal sums for the pair (q, r): for each point p (indexed in the input
/// set), |q-r| times the sum over cones not containing p of
/// (1/2 - angle/2pi) g4(W), plus the degenerate-triangle diagonal term.
/// Enters phi with a minus sign and the global 1/2 factor.
inline std::vector<double> case3_pair_removal(const PointSet& ps, int q, int r) {
    const auto pc = detail::compute_pair_case3(ps, q, r, false);
    const double d = norm(ps[q] - ps[r]);
    std::vector<double> out(static_cast<std::size_t>(ps.size()), 0.0);
    for (int i = 0; i < pc.order.size(); ++i) {
        out[static_cast<std::size_t>(pc.order.source(i))] =
            d * pc.removal[static_cast<std::size_t>(i)];
    }
    return out;
}

/// Apex-addition sums for the pair (q, r): for each point p, |q-r| times the
/// sum over the cones p forms with every other projected point of
/// (1/2 - angle/2pi) g3(W). Self pairs are excluded.
inline std::vector<double> case3_pair_addition_apex(const PointSet& ps, int q, int r) {
    const auto pc = detail::compute_pair_case3(ps, q, r, false);
    const double d = norm(ps[q] - ps[r]);
    std::vector<double> out(static_cast<std::size_t>(ps.size()), 0.0);
    for (int i = 0; i < pc.order.size(); ++i) {
        out[static_cast<std::size_t>(pc.order.source(i))] =
            d * pc.apex[static_cast<std::size_t>(i)];
    }
    return out;
}

/// Endpoint-addition contribution to phi(p) from the edge (p, r):
/// (1/2) |p-r| sum over unordered cone pairs of (1/2 - angle/2pi) g3(W).
/// The 1/2 is the pair double-counting factor of the left+right sums.
inline double case3_pair_addition_endpoint(const PointSet& ps, int p, int r) {
    const auto pc = detail::compute_pair_case3(ps, p, r, false);
    return 0.5 * norm(ps[p] - ps[r]) * pc.cone3;
}

/// Shapley values for the mean width of the 3-D convex hull.
/// phi(p) = case1 + case2 + (1/2) sum over unordered pairs (q, r) of
/// [apex + endpoint - removal] contributions. Deterministic for a fixed
/// input order; pair contributions reduce in pair order.
inline ShapleyResult shapley_mean_width(const PointSet& ps, const ShapleyOptions& opts = {}) {
    const int n = ps.size();
    ShapleyResult res;
    res.n = n;
    res.algorithm = "fast";
    res.phi.assign(static_cast<std::size_t>(n), 0.0);
    res.parts.assign(static_cast<std::size_t>(n), {});
    if (n == 0) return res;

    const std::vector<double> c1 = case1(ps);
    const std::vector<double> c2 = case2(ps);
    for (int p = 0; p < n; ++p) {
        const auto ip = static_cast<std::size_t>(p);
        res.parts[ip].case1 = c1[ip];
        res.parts[ip].case2 = c2[ip];
    }

    if (n >= 4) {
        std::vector<std::pair<int, int>> pairs;
        pairs.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
        for (int q = 0; q < n; ++q) {
            for (int r = q + 1; r < n; ++r) pairs.emplace_back(q, r);
        }

        struct Accum {
            std::vector<KahanSum> removal, apex, endpoint;
            explicit Accum(int n_)
                : removal(static_cast<std::size_t>(n_)),
                  apex(static_cast<std::size_t>(n_)),
                  endpoint(static_cast<std::size_t>(n_)) {}
        };

        auto run_range = [&](std::size_t lo, std::size_t hi, Accum& acc) {
            for (std::size_t k = lo; k < hi; ++k) {
                const auto [q, r] = pairs[k];
                const auto pc = detail::compute_pair_case3(ps, q, r, opts.paper_literal_diagonal);
                const double half_d = 0.5 * norm(ps[q] - ps[r]);
                for (int i = 0; i < pc.order.size(); ++i) {
                    const auto s = static_cast<std::size_t>(pc.order.source(i));
                    const auto ii = static_cast<std::size_t>(i);
                    acc.removal[s].add(-half_d * pc.removal[ii]);
                    acc.apex[s].add(half_d * pc.apex[ii]);
                }
                acc.endpoint[static_cast<std::size_t>(q)].add(half_d * pc.cone3);
                acc.endpoint[static_cast<std::size_t>(r)].add(half_d * pc.cone3);
            }
        };

        const int threads = std::max(1, std::min<int>(opts.threads,
                                                      static_cast<int>(pairs.size())));
        std::vector<Accum> accs;
        accs.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) accs.emplace_back(n);
        if (threads == 1) {
            run_range(0, pairs.size(), accs[0]);
        } else {
            std::vector<std::thread> workers;
            const std::size_t chunk = (pairs.size() + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const std::size_t lo = static_cast<std::size_t>(t) * chunk;
                const std::size_t hi = std::min(pairs.size(), lo + chunk);
                if (lo >= hi) break;
                workers.emplace_back([&, lo, hi, t] { run_range(lo, hi, accs[static_cast<std::size_t>(t)]); });
            }
            for (auto& w : workers) w.join();
        }
        for (int p = 0; p < n; ++p) {
            const auto ip = static_cast<std::size_t>(p);
            KahanSum rm, ap, ep;
            for (const Accum& acc : accs) {
                rm.add(acc.removal[ip].value());
                ap.add(acc.apex[ip].value());
                ep.add(acc.endpoint[ip].value());
            }
            res.parts[ip].case3_removal = rm.value();
            res.parts[ip].case3_apex = ap.value();
            res.parts[ip].case3_endpoint = ep.value();
        }
    }

    for (int p = 0; p < n; ++p) {
        const auto ip = static_cast<std::size_t>(p);
        res.phi[ip] = res.parts[ip].total();
    }
    return res;
}

} // namespace shapwidth
