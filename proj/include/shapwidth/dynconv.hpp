#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "shapwidth/errors.hpp"
#include "shapwidth/fft.hpp"
#include "shapwidth/kernel.hpp"
#include "shapwidth/util.hpp"

namespace shapwidth {

struct DynConvStats {
    std::uint64_t ops = 0;
    std::uint64_t updates = 0;
    std::uint64_t moves = 0;
    std::uint64_t rotations = 0;
    std::uint64_t queries = 0;
    std::uint64_t level_builds = 0;
    std::uint64_t fft_builds = 0;
    std::uint64_t direct_builds = 0;
    std::uint64_t merged_entries = 0;
    /// Work proxy for the amortized bound: kernel samples plus multiply-adds
    /// for direct builds, kernel samples plus butterfly count for FFT builds.
    std::uint64_t transform_samples = 0;
    int max_level = -1;
};

/// Dynamic convolution with local updates and queries.
///
/// Maintains a sparse f, a write cursor p and a rotation c, and answers
/// sum_i f(i+c) g(i) for a fixed kernel g. History is chunked by the binary
/// representation of the operation count: after op k there is one level per
/// set bit i of k holding the f-delta of its 2^i operations (H), an answer
/// array for every rotation reachable while the level lives (A, indices
/// c' in [-2^i, 2^i]) and the rotation drift since the level was built (I).
/// Every public call counts as one operation and is followed by the
/// maintenance step that rebuilds the lowest flipped level.
class DynConvState {
public:
    explicit DynConvState(KernelFn g, std::size_t direct_threshold = 32)
        : g_(std::move(g)), direct_threshold_(direct_threshold) {}

    /// f(p) += x
    void update(double x) {
        f_[p_] += x;
        ++stats_.updates;
        begin_op();
        maintain(p_, x, true);
    }

    /// p += dir (dir = +1 or -1)
    void move(int dir) {
        p_ += dir;
        ++stats_.moves;
        begin_op();
        maintain(0, 0.0, false);
    }

    /// c += dir; every live level's drift follows.
    void rotate(int dir) {
        c_ += dir;
        for (auto& lv : levels_) {
            if (lv) lv->rot += dir;
        }
        ++stats_.rotations;
        begin_op();
        maintain(0, 0.0, false);
    }

    /// Returns sum_i f(i+c) g(i) for the state before this call, then runs
    /// this call's own maintenance (a query is an operation too).
    double query() {
        KahanSum sum;
        for (const auto& lv : levels_) {
            if (!lv) continue;
            const std::int64_t half = std::int64_t{1} << lv->idx;
            if (lv->rot < -half || lv->rot > half) {
                throw std::logic_error("dynconv: level drift exceeds 2^i (Lemma 3.5 violated)");
            }
            sum.add(lv->a[static_cast<std::size_t>(half + lv->rot)]);
        }
        ++stats_.queries;
        begin_op();
        maintain(0, 0.0, false);
        return sum.value();
    }

    std::int64_t cursor() const { return p_; }
    std::int64_t rotation() const { return c_; }
    std::uint64_t op_count() const { return ops_; }
    const DynConvStats& stats() const { return stats_; }
    const KernelFn& kernel() const { return g_; }
    const std::unordered_map<std::int64_t, double>& function_values() const { return f_; }

    /// Bytes-independent size measure: total live H and A entries.
    std::size_t live_entries() const {
        std::size_t total = 0;
        for (const auto& lv : levels_) {
            if (lv) total += lv->h.size() + lv->a.size();
        }
        return total;
    }

    /// Structural invariants. `deep` additionally reconstructs f from the
    /// live levels (tolerance-compared; level merges regroup additions).
    void check_invariants(bool deep = false) const {
        for (int i = 0; i < 64; ++i) {
            const bool bit = (ops_ >> i) & 1u;
            const bool live = i < static_cast<int>(levels_.size()) && levels_[i].has_value();
            if (bit != live) throw std::logic_error("dynconv: live levels != set bits of op count");
            if (!live) continue;
            const auto& lv = *levels_[i];
            const std::int64_t cap = std::int64_t{1} << i;
            if (static_cast<std::int64_t>(lv.h.size()) > cap)
                throw std::logic_error("dynconv: |supp H| > 2^i");
            if (!lv.h.empty() && lv.h.back().first - lv.h.front().first > cap)
                throw std::logic_error("dynconv: supp H span > 2^i");
            if (lv.a.size() != static_cast<std::size_t>(2 * cap + 1))
                throw std::logic_error("dynconv: |A| != 2^{i+1}+1");
            if (lv.rot < -cap || lv.rot > cap)
                throw std::logic_error("dynconv: |I| > 2^i");
        }
        if (deep) {
            std::unordered_map<std::int64_t, double> rebuilt;
            double scale = 0.0;
            for (const auto& lv : levels_) {
                if (!lv) continue;
                for (const auto& [pos, val] : lv->h) {
                    rebuilt[pos] += val;
                    scale = std::max(scale, std::abs(val));
                }
            }
            for (const auto& [pos, val] : f_) {
                const double got = rebuilt.count(pos) ? rebuilt[pos] : 0.0;
                if (std::abs(got - val) > 1e-9 * std::max(1.0, scale))
                    throw std::logic_error("dynconv: levels do not sum to f");
            }
        }
    }

private:
    struct Level {
        int idx = 0;
        std::vector<std::pair<std::int64_t, double>> h; // position-sorted deltas
        std::vector<double> a;                          // answers, offset by 2^idx
        std::int64_t rot = 0;                           // c drift since build
    };

    void begin_op() {
        ++ops_;
        ++stats_.ops;
    }

    /// Rebuild level i* = lowest set bit of the new op count from the levels
    /// below it plus this operation's f-delta.
    void maintain(std::int64_t dpos, double dval, bool has_delta) {
        const int star = std::countr_zero(ops_);
        if (static_cast<int>(levels_.size()) <= star) levels_.resize(star + 1);

        // Gather deltas oldest-first (higher levels hold earlier operations).
        merge_buf_.clear();
        for (int i = star - 1; i >= 0; --i) {
            if (!levels_[i]) continue;
            merge_buf_.insert(merge_buf_.end(), levels_[i]->h.begin(), levels_[i]->h.end());
            levels_[i].reset();
        }
        if (has_delta && dval != 0.0) merge_buf_.emplace_back(dpos, dval);
        std::stable_sort(merge_buf_.begin(), merge_buf_.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });

        Level lv;
        lv.idx = star;
        lv.rot = 0;
        lv.h.reserve(merge_buf_.size());
        for (const auto& [pos, val] : merge_buf_) {
            if (!lv.h.empty() && lv.h.back().first == pos) {
                lv.h.back().second += val;
                if (lv.h.back().second == 0.0) lv.h.pop_back();
            } else if (val != 0.0) {
                lv.h.emplace_back(pos, val);
            }
        }
        stats_.merged_entries += lv.h.size();

        build_answers(lv);
        ++stats_.level_builds;
        stats_.max_level = std::max(stats_.max_level, star);
        levels_[star] = std::move(lv);
    }

    void build_answers(Level& lv) {
        const std::int64_t half = std::int64_t{1} << lv.idx;
        lv.a.assign(static_cast<std::size_t>(2 * half + 1), 0.0);
        if (lv.h.empty()) return;

        const std::int64_t L = lv.h.front().first;
        const std::int64_t R = lv.h.back().first;
        // Window sampled by the shifted kernel g'(s) = g(-s + L - c + 2^{i+1}).
        const std::int64_t arg_lo = L - c_ - half;
        const std::int64_t arg_hi = L - c_ + 2 * half;
        if (arg_lo < g_.lo || arg_hi > g_.hi) {
            throw KernelWindowError("dynconv maintenance sampled kernel on [" +
                                    std::to_string(arg_lo) + ", " + std::to_string(arg_hi) +
                                    "] outside declared window");
        }

        if (static_cast<std::size_t>(half) <= direct_threshold_) {
            // Small chunk: direct accumulation against a dense kernel window.
            const std::int64_t wlen = R - L + 2 * half + 1;
            kernel_win_.resize(static_cast<std::size_t>(wlen));
            for (std::int64_t t = 0; t < wlen; ++t) {
                kernel_win_[static_cast<std::size_t>(t)] = g_.fn(arg_lo + t);
            }
            for (const auto& [pos, val] : lv.h) {
                // A[j] += val * w[pos - L + 2^{i+1} - j], j = c' + 2^i
                const std::int64_t off = pos - L + 2 * half;
                for (std::int64_t j = 0; j <= 2 * half; ++j) {
                    lv.a[static_cast<std::size_t>(j)] +=
                        val * kernel_win_[static_cast<std::size_t>(off - j)];
                }
            }
            ++stats_.direct_builds;
            stats_.transform_samples +=
                static_cast<std::uint64_t>(wlen) +
                static_cast<std::uint64_t>(lv.h.size()) * static_cast<std::uint64_t>(2 * half + 1);
        } else {
            // A(i*, 2^i + c') = (H' * g')[2^{i+1} + c'] with H' the chunk
            // shifted to start at zero and g' the reversed kernel window.
            hbuf_.assign(static_cast<std::size_t>(R - L + 1), 0.0);
            for (const auto& [pos, val] : lv.h) {
                hbuf_[static_cast<std::size_t>(pos - L)] = val;
            }
            const std::int64_t glen = 3 * half + 1;
            gbuf_.resize(static_cast<std::size_t>(glen));
            for (std::int64_t s = 0; s < glen; ++s) {
                gbuf_[static_cast<std::size_t>(s)] = g_.fn(-s + L - c_ + 2 * half);
            }
            conv_.linear(hbuf_, gbuf_, cbuf_, direct_threshold_);
            for (std::int64_t j = 0; j <= 2 * half; ++j) {
                lv.a[static_cast<std::size_t>(j)] = cbuf_[static_cast<std::size_t>(half + j)];
            }
            ++stats_.fft_builds;
            const std::uint64_t padded = std::bit_ceil(hbuf_.size() + gbuf_.size() - 1);
            stats_.transform_samples +=
                static_cast<std::uint64_t>(glen) +
                3 * padded * static_cast<std::uint64_t>(std::bit_width(padded) - 1);
        }
    }

    KernelFn g_;
    std::size_t direct_threshold_;
    std::unordered_map<std::int64_t, double> f_;
    std::int64_t p_ = 0;
    std::int64_t c_ = 0;
    std::uint64_t ops_ = 0;
    std::vector<std::optional<Level>> levels_;
    DynConvStats stats_;

    // Scratch reused across maintenance steps.
    std::vector<std::pair<std::int64_t, double>> merge_buf_;
    std::vector<double> kernel_win_, hbuf_, gbuf_, cbuf_;
    Convolver conv_;
};

/// Reference implementation: explicit sparse f, query in O(|supp f|).
class NaiveDynConv {
public:
    explicit NaiveDynConv(KernelFn g) : g_(std::move(g)) {}

    void update(double x) { f_[p_] += x; }
    void move(int dir) { p_ += dir; }
    void rotate(int dir) { c_ += dir; }

    double query() const {
        KahanSum sum;
        for (const auto& [pos, val] : f_) {
            if (val == 0.0) continue;
            sum.add(val * g_(pos - c_));
        }
        return sum.value();
    }

    std::int64_t cursor() const { return p_; }
    std::int64_t rotation() const { return c_; }
    std::size_t support_size() const { return f_.size(); }

private:
    KernelFn g_;
    std::unordered_map<std::int64_t, double> f_;
    std::int64_t p_ = 0;
    std::int64_t c_ = 0;
};

enum class DcOpType { update, inc_p, dec_p, rotate_left, rotate_right, query };

struct DcOp {
    DcOpType type;
    double value = 0.0;
};

/// Replays an operation log on the naive structure and returns the final
/// query value sum_i f(i+c) g(i).
inline double dc_naive_query(std::span<const DcOp> log, const KernelFn& g) {
    NaiveDynConv ref(g);
    for (const DcOp& op : log) {
        switch (op.type) {
            case DcOpType::update: ref.update(op.value); break;
            case DcOpType::inc_p: ref.move(+1); break;
            case DcOpType::dec_p: ref.move(-1); break;
            case DcOpType::rotate_left: ref.rotate(+1); break;
            case DcOpType::rotate_right: ref.rotate(-1); break;
            case DcOpType::query: break;
        }
    }
    return ref.query();
}

/// Queue view over two DynConvState instances: push to the tail, pop from
/// the head (caller supplies the popped value), and query
///   sum_{i=1..|Q|} Q(i) gamma(|Q|-i).
/// Element t (1-based over the queue's lifetime) lives at position t-1 of
/// the tail instance while the rotation tracks the push count, so its query
/// argument is (pushes - t); the head instance carries the cancelling
/// negative updates for popped elements. The instances' kernel is
/// K(x) = gamma(-x-1), zero-extended so that fully popped mass cancels
/// exactly and maintenance may sample K anywhere in its op-bounded window.
class ConvQueue {
public:
    explicit ConvQueue(KernelFn gamma, std::uint64_t op_budget = 1u << 20)
        : gamma_hi_(gamma.hi),
          tail_(adapt(gamma, op_budget)),
          head_(adapt(gamma, op_budget)) {}

    void push(double x) {
        ++pushes_;
        tail_.update(x);
        tail_.rotate(+1);
        tail_.move(+1);
        head_.rotate(+1);
    }

    void pop(double x) {
        if (size() == 0) throw EmptyQueueError("pop on empty ConvQueue");
        head_.update(-x);
        head_.move(+1);
        ++pops_;
    }

    double query() {
        if (size() > 0 && static_cast<std::int64_t>(size()) - 1 > gamma_hi_) {
            throw KernelWindowError("ConvQueue query needs gamma up to " +
                                    std::to_string(size() - 1) + ", declared window ends at " +
                                    std::to_string(gamma_hi_));
        }
        return tail_.query() + head_.query();
    }

    std::size_t size() const { return static_cast<std::size_t>(pushes_ - pops_); }
    const DynConvState& tail_instance() const { return tail_; }
    const DynConvState& head_instance() const { return head_; }

private:
    static KernelFn adapt(const KernelFn& gamma, std::uint64_t op_budget) {
        const std::int64_t bound = 6 * static_cast<std::int64_t>(4 * op_budget) + 64;
        auto glo = gamma.lo, ghi = gamma.hi;
        auto fn = gamma.fn;
        return KernelFn{[fn, glo, ghi](std::int64_t x) {
                            const std::int64_t arg = -x - 1;
                            return (arg >= std::max<std::int64_t>(glo, 0) && arg <= ghi)
                                       ? fn(arg)
                                       : 0.0;
                        },
                        -bound, bound};
    }

    std::int64_t gamma_hi_;
    DynConvState tail_;
    DynConvState head_;
    std::uint64_t pushes_ = 0;
    std::uint64_t pops_ = 0;
};

} // namespace shapwidth
