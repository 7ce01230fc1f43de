#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <utility>
#include <vector>

#include "shapwidth/dynconv.hpp"
#include "shapwidth/geometry.hpp"
#include "shapwidth/kernel.hpp"
#include "shapwidth/util.hpp"

namespace shapwidth {

/// Per-point weight used inside a sweep: called with the point's position in
/// the polar order and its lifted angle at push time.
using WeightFn = std::function<double(int order_index, double lifted_theta)>;

/// Per-index sums over one side of the polar order:
///   with_self[i] = sum_{j in Side(p_i) + {p_i}} f(j) gamma(arg(i,j))
/// where arg counts queue distance (cone interior count plus one; the
/// production kernels from make_sweep_kernel absorb the shift). self[i] is
/// the diagonal term f(i) gamma(0); consumers subtract it where the paper's
/// sums exclude the point itself. lifted[i] is the query-time lifted angle,
/// consistent with the lifts the weights saw.
struct SweepSums {
    std::vector<double> with_self;
    std::vector<double> self_term;
    std::vector<double> lifted;

    double corrected(int i) const {
        return with_self[static_cast<std::size_t>(i)] - self_term[static_cast<std::size_t>(i)];
    }
};

namespace detail {

struct QueueEntry {
    double theta;
    double value;
};

} // namespace detail

/// One full rotating sweep around the projected origin. Two revolutions:
/// the first fills the queue, queries happen on the second, when every point
/// has its full within-pi backlog behind it. Each point is pushed and popped
/// at most twice and queried exactly once.
inline SweepSums sweep_sums(const PolarSweepOrder& order, Side side, const WeightFn& f,
                            const KernelFn& gamma) {
    const int m = order.size();
    SweepSums out;
    out.with_self.assign(static_cast<std::size_t>(m), 0.0);
    out.self_term.assign(static_cast<std::size_t>(m), 0.0);
    out.lifted.assign(static_cast<std::size_t>(m), 0.0);
    if (m == 0) return out;

    const double gamma0 = gamma(0);
    ConvQueue queue(gamma, static_cast<std::uint64_t>(6 * m + 16));
    std::deque<detail::QueueEntry> mirror;

    for (int t = 0; t < 2 * m; ++t) {
        int j;
        double theta;
        if (side == Side::Right) {
            j = order.index(t);
            theta = order.lifted_theta(t);
            while (!mirror.empty() && theta - mirror.front().theta > kPi) {
                queue.pop(mirror.front().value);
                mirror.pop_front();
            }
        } else {
            j = order.index(m - 1 - (t % m));
            theta = order.theta(j) - kTwoPi * static_cast<double>(t / m);
            while (!mirror.empty() && mirror.front().theta - theta > kPi) {
                queue.pop(mirror.front().value);
                mirror.pop_front();
            }
        }
        const double val = f(j, theta);
        queue.push(val);
        mirror.push_back({theta, val});
        if (t >= m) {
            out.with_self[static_cast<std::size_t>(j)] = queue.query();
            out.self_term[static_cast<std::size_t>(j)] = val * gamma0;
            out.lifted[static_cast<std::size_t>(j)] = theta;
        }
    }
    return out;
}

/// sum over the cone pairs not containing p_{i0}: for every ordered pair
/// (p_j, p_k) swept counterclockwise from just after p_{i0}, within pi,
/// f(j) gamma(arg(j,k)). Diagonal (j = k) pairs are excluded.
inline double initial_cone_sum(const PolarSweepOrder& order, int i0, const WeightFn& f,
                               const KernelFn& gamma) {
    const int m = order.size();
    if (m <= 1) return 0.0;
    const double gamma0 = gamma(0);
    ConvQueue queue(gamma, static_cast<std::uint64_t>(4 * m + 16));
    std::deque<detail::QueueEntry> mirror;
    KahanSum total;
    for (int t = 1; t < m; ++t) {
        const int j = order.index(i0 + t);
        const double theta = order.lifted_theta(i0 + t);
        while (!mirror.empty() && theta - mirror.front().theta > kPi) {
            queue.pop(mirror.front().value);
            mirror.pop_front();
        }
        const double val = f(j, theta);
        queue.push(val);
        mirror.push_back({theta, val});
        total.add(queue.query() - val * gamma0);
    }
    return total.value();
}

// ---------------------------------------------------------------------------
// Engine-side combined sweeps. One pass per direction drives the arity-3 and
// arity-4 kernels and both weight channels (1 and theta/2pi) in lockstep, so
// the per-pair work stays at a handful of queue traversals.
// ---------------------------------------------------------------------------

namespace detail {

struct EngineEntry {
    double theta;
    double v1;
    double vth;
};

} // namespace detail

/// With-self sweep sums for one direction, all four (kernel, weight)
/// channels, plus the query-time lifts.
struct DirectionalSums {
    std::vector<double> one3, theta3, one4, theta4, lift;
};

inline DirectionalSums engine_sweep(const PolarSweepOrder& order, Side side, const KernelFn& g3,
                                    const KernelFn& g4) {
    const int m = order.size();
    DirectionalSums out;
    out.one3.assign(static_cast<std::size_t>(m), 0.0);
    out.theta3.assign(static_cast<std::size_t>(m), 0.0);
    out.one4.assign(static_cast<std::size_t>(m), 0.0);
    out.theta4.assign(static_cast<std::size_t>(m), 0.0);
    out.lift.assign(static_cast<std::size_t>(m), 0.0);
    if (m == 0) return out;

    const std::uint64_t budget = static_cast<std::uint64_t>(6 * m + 16);
    ConvQueue q13(g3, budget), qt3(g3, budget), q14(g4, budget), qt4(g4, budget);
    std::deque<detail::EngineEntry> mirror;

    for (int t = 0; t < 2 * m; ++t) {
        int j;
        double theta;
        if (side == Side::Right) {
            j = order.index(t);
            theta = order.lifted_theta(t);
            while (!mirror.empty() && theta - mirror.front().theta > kPi) {
                const auto& e = mirror.front();
                q13.pop(e.v1);
                qt3.pop(e.vth);
                q14.pop(e.v1);
                qt4.pop(e.vth);
                mirror.pop_front();
            }
        } else {
            j = order.index(m - 1 - (t % m));
            theta = order.theta(j) - kTwoPi * static_cast<double>(t / m);
            while (!mirror.empty() && mirror.front().theta - theta > kPi) {
                const auto& e = mirror.front();
                q13.pop(e.v1);
                qt3.pop(e.vth);
                q14.pop(e.v1);
                qt4.pop(e.vth);
                mirror.pop_front();
            }
        }
        const double vth = theta / kTwoPi;
        q13.push(1.0);
        qt3.push(vth);
        q14.push(1.0);
        qt4.push(vth);
        mirror.push_back({theta, 1.0, vth});
        if (t >= m) {
            const auto ij = static_cast<std::size_t>(j);
            out.one3[ij] = q13.query();
            out.theta3[ij] = qt3.query();
            out.one4[ij] = q14.query();
            out.theta4[ij] = qt4.query();
            out.lift[ij] = theta;
        }
    }
    return out;
}

/// Initial-cone sums at i0 = 0 for the arity-4 kernel, both endpoint-weight
/// combinations needed by the removal transition:
///   init11  = sum f=1,        end-weight 1
///   init1th = sum f=1,        end-weight theta_k/2pi
///   initth1 = sum f=theta/2pi, end-weight 1
/// Self pairs are excluded unless `keep_diagonal` (the paper-literal
/// comparison variant) is set.
struct InitialConeSums {
    double init11 = 0.0;
    double init1th = 0.0;
    double initth1 = 0.0;
};

inline InitialConeSums engine_initial_cone(const PolarSweepOrder& order, const KernelFn& g4,
                                           bool keep_diagonal = false) {
    const int m = order.size();
    InitialConeSums out;
    if (m <= 1) return out;
    const double gamma0 = g4(0);
    const std::uint64_t budget = static_cast<std::uint64_t>(4 * m + 16);
    ConvQueue q1(g4, budget), qth(g4, budget);
    std::deque<detail::EngineEntry> mirror;
    KahanSum s11, s1th, sth1;
    for (int t = 1; t < m; ++t) {
        const int j = order.index(t);
        const double theta = order.lifted_theta(t);
        while (!mirror.empty() && theta - mirror.front().theta > kPi) {
            const auto& e = mirror.front();
            q1.pop(e.v1);
            qth.pop(e.vth);
            mirror.pop_front();
        }
        const double vth = theta / kTwoPi;
        q1.push(1.0);
        qth.push(vth);
        mirror.push_back({theta, 1.0, vth});
        double c1 = q1.query();
        double cth = qth.query();
        if (!keep_diagonal) {
            c1 -= gamma0;
            cth -= vth * gamma0;
        }
        s11.add(c1);
        s1th.add(vth * c1);
        sth1.add(cth);
    }
    out.init11 = s11.value();
    out.init1th = s1th.value();
    out.initth1 = sth1.value();
    return out;
}

} // namespace shapwidth
