#pragma once

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <thread>
#include <vector>

#include "causetlab/geometry.hpp"
#include "causetlab/sampling.hpp"

namespace causetlab {

// Longest-chain length plus one chain realizing it (indices into the input).
struct HeightResult {
    std::uint32_t height = 0;
    std::vector<std::uint32_t> witness_chain;
};

namespace detail {

// Light-cone coordinates u = t - x, v = t + x turn the d = 2 causal order
// into strict coordinatewise dominance, so chains are strictly increasing
// subsequences. Points are held in (u asc, v desc) order; the v-descending
// tie rule keeps equal-u points (null separated) from chaining.
struct LightconeOrder {
    std::vector<double> u;
    std::vector<double> v;
    std::vector<std::uint32_t> vrank; // rank of v among all points (ties share)
    std::vector<std::uint32_t> to_input;
};

inline LightconeOrder lightcone_order(std::span<const Point> pts) {
    const std::size_t n = pts.size();
    LightconeOrder lc;
    lc.u.resize(n);
    lc.v.resize(n);
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<double> ru(n), rv(n);
    for (std::size_t i = 0; i < n; ++i) {
        ru[i] = pts[i][0] - pts[i][1];
        rv[i] = pts[i][0] + pts[i][1];
    }
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (ru[a] != ru[b]) return ru[a] < ru[b];
        return rv[a] > rv[b];
    });
    lc.to_input = idx;
    for (std::size_t i = 0; i < n; ++i) {
        lc.u[i] = ru[idx[i]];
        lc.v[i] = rv[idx[i]];
    }
    std::vector<double> sorted_v = lc.v;
    std::sort(sorted_v.begin(), sorted_v.end());
    sorted_v.erase(std::unique(sorted_v.begin(), sorted_v.end()), sorted_v.end());
    lc.vrank.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        lc.vrank[i] = static_cast<std::uint32_t>(
            std::lower_bound(sorted_v.begin(), sorted_v.end(), lc.v[i]) - sorted_v.begin());
    return lc;
}

// Patience-style strictly-increasing-subsequence with witness recovery.
inline HeightResult height_lis(std::span<const Point> pts) {
    const LightconeOrder lc = lightcone_order(pts);
    const std::size_t n = pts.size();
    std::vector<double> tails;
    std::vector<std::uint32_t> tail_pos;
    std::vector<std::uint32_t> prev(n, UINT32_MAX);
    tails.reserve(64);
    tail_pos.reserve(64);
    for (std::size_t j = 0; j < n; ++j) {
        const double vj = lc.v[j];
        const std::size_t p =
            std::lower_bound(tails.begin(), tails.end(), vj) - tails.begin();
        prev[j] = p > 0 ? tail_pos[p - 1] : UINT32_MAX;
        if (p == tails.size()) {
            tails.push_back(vj);
            tail_pos.push_back(static_cast<std::uint32_t>(j));
        } else {
            tails[p] = vj;
            tail_pos[p] = static_cast<std::uint32_t>(j);
        }
    }
    HeightResult res;
    res.height = static_cast<std::uint32_t>(tails.size());
    if (!tails.empty()) {
        res.witness_chain.reserve(tails.size());
        for (std::uint32_t cur = tail_pos.back(); cur != UINT32_MAX; cur = prev[cur])
            res.witness_chain.push_back(lc.to_input[cur]);
        std::reverse(res.witness_chain.begin(), res.witness_chain.end());
    }
    return res;
}

// General-dimension longest chain by dynamic programming over the
// time-sorted order; ties in the best predecessor go to the lowest index.
inline HeightResult height_dp(std::span<const Point> pts) {
    const std::size_t n = pts.size();
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(),
              [&](std::uint32_t a, std::uint32_t b) { return pts[a].coords < pts[b].coords; });

    const std::size_t d = n > 0 ? pts[0].dim() : 0;
    std::vector<double> flat(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) flat[i * d + k] = pts[idx[i]][k];

    std::vector<std::uint32_t> dp(n, 1), pred(n, UINT32_MAX);
    std::uint32_t best = n > 0 ? 1 : 0, best_at = 0;
    for (std::size_t j = 1; j < n; ++j) {
        const double* pj = &flat[j * d];
        std::uint32_t bj = 0, pj_pred = UINT32_MAX;
        for (std::size_t i = 0; i < j; ++i) {
            if (dp[i] <= bj) continue;
            const double* pi = &flat[i * d];
            const double dt = pj[0] - pi[0];
            if (dt <= 0.0) continue;
            double s = dt * dt;
            for (std::size_t k = 1; k < d; ++k) {
                const double dx = pj[k] - pi[k];
                s -= dx * dx;
            }
            if (s > 0.0) {
                bj = dp[i];
                pj_pred = static_cast<std::uint32_t>(i);
            }
        }
        dp[j] = bj + 1;
        pred[j] = pj_pred;
        if (dp[j] > best) {
            best = dp[j];
            best_at = static_cast<std::uint32_t>(j);
        }
    }
    HeightResult res;
    res.height = best;
    if (n > 0) {
        res.witness_chain.reserve(best);
        for (std::uint32_t cur = best_at; cur != UINT32_MAX; cur = pred[cur])
            res.witness_chain.push_back(idx[cur]);
        std::reverse(res.witness_chain.begin(), res.witness_chain.end());
    }
    return res;
}

} // namespace detail

// Longest chain under the causal order. d = 2 takes the light-cone
// increasing-subsequence fast path; other dimensions use the DAG dynamic
// program. The two agree exactly (tested against each other).
inline HeightResult height(std::span<const Point> pts) {
    if (pts.empty()) return {};
    if (pts[0].dim() == 2) return detail::height_lis(pts);
    return detail::height_dp(pts);
}

inline HeightResult height(const CausetSample& s) { return height(std::span(s.points)); }

// Independent chain-height implementation (prefix-max tree over v-ranks in
// u-order). Kept deliberately separate from the patience path; used as the
// cross-check reference.
inline std::uint32_t height_reference(std::span<const Point> pts) {
    const std::size_t n = pts.size();
    if (n == 0) return 0;
    const detail::LightconeOrder lc = detail::lightcone_order(pts);
    // rank-compress v (equal values share a rank)
    std::vector<double> sorted_v = lc.v;
    std::sort(sorted_v.begin(), sorted_v.end());
    sorted_v.erase(std::unique(sorted_v.begin(), sorted_v.end()), sorted_v.end());
    const std::size_t m = sorted_v.size();
    std::vector<std::uint32_t> tree(m + 1, 0);
    auto update = [&](std::size_t i, std::uint32_t val) {
        for (; i <= m; i += i & (~i + 1))
            if (tree[i] < val) tree[i] = val;
    };
    auto query = [&](std::size_t i) {
        std::uint32_t best = 0;
        for (; i > 0; i -= i & (~i + 1))
            if (tree[i] > best) best = tree[i];
        return best;
    };
    std::uint32_t best = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t rank =
            std::lower_bound(sorted_v.begin(), sorted_v.end(), lc.v[j]) - sorted_v.begin() + 1;
        const std::uint32_t len = query(rank - 1) + 1;
        update(rank, len);
        if (len > best) best = len;
    }
    return best;
}

// Height of the sample restricted to the open interval (x, y). Endpoints are
// excluded even when they are sample points. Witness indices refer to
// s.points.
inline HeightResult interval_height(const CausetSample& s, const Point& x, const Point& y) {
    std::vector<Point> inside;
    std::vector<std::uint32_t> map_back;
    const IntervalSpec iv = make_interval(x, y);
    if (iv.proper_time > 0.0) {
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            const Point& p = s.points[i];
            if (p[0] <= x[0] || p[0] >= y[0]) continue;
            if (interval_contains(iv, p)) {
                inside.push_back(p);
                map_back.push_back(static_cast<std::uint32_t>(i));
            }
        }
    }
    HeightResult res = height(std::span(inside));
    for (auto& w : res.witness_chain) w = map_back[w];
    return res;
}

// D(x, y) = H((x, y) ∩ sample) / (c_d · lambda^{1/d}).
inline double discrete_distance(const CausetSample& s, const Point& x, const Point& y, double c_d) {
    if (c_d <= 0.0) throw std::invalid_argument("discrete_distance: c_d must be positive");
    const double norm = c_d * std::pow(s.density, 1.0 / static_cast<double>(s.dim()));
    return static_cast<double>(interval_height(s, x, y).height) / norm;
}

// ---------------------------------------------------------------------------
// Bulk kernels used by the convergence estimator and the axiom checks.

namespace detail {

// Chain heights from one source to every later position of a light-cone
// ordered point set: out[j] = H((source, j) ∩ points), UINT32_MAX at
// non-causal positions (and at the source itself).
inline void source_heights_d2(const LightconeOrder& lc, std::size_t source,
                              std::vector<std::uint32_t>& out,
                              std::vector<double>& tails_scratch) {
    const std::size_t n = lc.u.size();
    out.assign(n, UINT32_MAX);
    tails_scratch.clear();
    const double us = lc.u[source], vs = lc.v[source];
    for (std::size_t j = source + 1; j < n; ++j) {
        if (lc.v[j] <= vs || lc.u[j] <= us) continue;
        const double vj = lc.v[j];
        const std::size_t p =
            std::lower_bound(tails_scratch.begin(), tails_scratch.end(), vj) -
            tails_scratch.begin();
        out[j] = static_cast<std::uint32_t>(p);
        if (p == tails_scratch.size()) tails_scratch.push_back(vj);
        else tails_scratch[p] = vj;
    }
}

} // namespace detail

struct DeviationFold {
    double discrete_over = 0.0;  // max of D - d over causal pairs
    double discrete_under = 0.0; // max of d - D over causal pairs
    std::uint64_t causal_pairs = 0;

    double distortion() const { return std::max(discrete_over, discrete_under); }
};

namespace detail {

// Rank of rj (count of values < rj) in the ascending prefix tails[0..size).
// The multiply-select compiles to a conditional move; callers must pad the
// array with the max sentinel up to at least 2*size so probes never need a
// bounds check.
inline std::size_t tails_rank(const std::uint32_t* tails, std::size_t size, std::uint32_t rj) {
    std::size_t pos = 0;
    for (std::size_t b = std::bit_floor(size); b > 0; b >>= 1)
        pos += static_cast<std::size_t>(tails[pos + b - 1] < rj) * b;
    return pos;
}

// Scratch of the deviation sweep: kSweepBlock sources processed together so
// their independent tail searches overlap in the out-of-order window.
inline constexpr std::size_t kSweepBlock = 4;

struct SweepScratch {
    std::vector<double> cu[kSweepBlock], cv[kSweepBlock];
    std::vector<std::uint32_t> cr[kSweepBlock];
    std::vector<std::uint32_t> tails[kSweepBlock];
};

// Folds a block of consecutive sources (positions i0..i0+count-1 in the
// light-cone order) into the running maxima. Candidates are compacted per
// source first; the patience loop then advances all sources in lockstep so
// their independent tail probes overlap. max_tail bounds any per-source
// chain length (the whole-sample height works).
inline void deviation_fold_block(const LightconeOrder& lc, std::size_t i0, std::size_t count,
                                 double inv_scale, std::size_t max_tail, SweepScratch& scratch,
                                 DeviationFold& fold) {
    const std::size_t n = lc.u.size();
    const double* u = lc.u.data();
    const double* v = lc.v.data();
    const std::uint32_t* vr = lc.vrank.data();
    std::size_t cnt[kSweepBlock] = {};
    double src_u[kSweepBlock] = {}, src_v[kSweepBlock] = {};
    std::size_t kmax = 0;
    for (std::size_t s = 0; s < count; ++s) {
        const std::size_t i = i0 + s;
        src_u[s] = u[i];
        src_v[s] = v[i];
        scratch.cu[s].resize(n);
        scratch.cv[s].resize(n);
        scratch.cr[s].resize(n);
        double* cu = scratch.cu[s].data();
        double* cv = scratch.cv[s].data();
        std::uint32_t* cr = scratch.cr[s].data();
        std::size_t c = 0;
        for (std::size_t j = i + 1; j < n; ++j) {
            cu[c] = u[j];
            cv[c] = v[j];
            cr[c] = vr[j];
            c += (v[j] > src_v[s]) & (u[j] > src_u[s]);
        }
        cnt[s] = c;
        scratch.tails[s].assign(2 * max_tail + 4, UINT32_MAX);
        fold.causal_pairs += c;
        kmax = std::max(kmax, c);
    }

    std::size_t tail_size[kSweepBlock] = {};
    std::uint32_t* tails[kSweepBlock] = {};
    for (std::size_t s = 0; s < count; ++s) tails[s] = scratch.tails[s].data();
    double over = fold.discrete_over, under = fold.discrete_under;
    std::size_t pos[kSweepBlock], bstep[kSweepBlock];
    std::uint32_t rj[kSweepBlock];
    for (std::size_t k = 0; k < kmax; ++k) {
        // all sources advance their rank searches one level per round, so the
        // independent L1 probes overlap instead of serializing
        std::size_t pending = 0;
        for (std::size_t s = 0; s < count; ++s) {
            const bool live = k < cnt[s];
            rj[s] = live ? scratch.cr[s][k] : 0;
            pos[s] = 0;
            bstep[s] = live ? std::bit_floor(tail_size[s]) : 0;
            pending |= bstep[s];
        }
        while (pending) {
            pending = 0;
            for (std::size_t s = 0; s < count; ++s) {
                const std::size_t b = bstep[s];
                if (b == 0) continue;
                pos[s] += static_cast<std::size_t>(tails[s][pos[s] + b - 1] < rj[s]) * b;
                bstep[s] = b >> 1;
                pending |= bstep[s];
            }
        }
        for (std::size_t s = 0; s < count; ++s) {
            if (k >= cnt[s]) continue;
            const std::size_t p = pos[s];
            const double m =
                (scratch.cu[s][k] - src_u[s]) * (scratch.cv[s][k] - src_v[s]);
            const double discrete = static_cast<double>(p) * inv_scale;
            const double ta = discrete - over;
            if (ta > 0.0 && m < ta * ta) over = discrete - std::sqrt(m);
            const double tb = discrete + under;
            if (m > tb * tb) under = std::sqrt(m) - discrete;
            tails[s][p] = rj[s];
            tail_size[s] += (p == tail_size[s]) ? 1 : 0;
        }
    }
    fold.discrete_over = over;
    fold.discrete_under = under;
}

} // namespace detail

// Exact fold of max |D(x,y) - d(x,y)| over all ordered sample pairs in d = 2.
// One patience sweep per source; square roots fire only on candidate
// improvements, everything else stays in squared terms. Sources can be
// partitioned across threads (the fold is a max, so the split is exact).
inline DeviationFold pair_deviation_d2(const detail::LightconeOrder& lc, double inv_scale,
                                       unsigned threads = 1) {
    const std::size_t n = lc.u.size();
    DeviationFold fold;
    if (n < 2) return fold;

    // bound every per-source tail array by the whole-sample chain height
    std::vector<double> tails;
    tails.reserve(1024);
    for (std::size_t j = 0; j < n; ++j) {
        const auto it = std::lower_bound(tails.begin(), tails.end(), lc.v[j]);
        if (it == tails.end()) tails.push_back(lc.v[j]);
        else *it = lc.v[j];
    }
    const std::size_t max_tail = tails.size();

    if (threads <= 1) {
        detail::SweepScratch scratch;
        for (std::size_t i = 0; i + 1 < n; i += detail::kSweepBlock)
            detail::deviation_fold_block(lc, i, std::min(detail::kSweepBlock, n - 1 - i),
                                         inv_scale, max_tail, scratch, fold);
        return fold;
    }
    std::vector<DeviationFold> partial(threads);
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    constexpr std::size_t kChunk = 16; // blocks per grab
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            detail::SweepScratch scratch;
            for (;;) {
                const std::size_t start = next.fetch_add(kChunk) * detail::kSweepBlock;
                if (start + 1 >= n) return;
                const std::size_t stop =
                    std::min(n - 1, start + kChunk * detail::kSweepBlock);
                for (std::size_t i = start; i < stop; i += detail::kSweepBlock)
                    detail::deviation_fold_block(lc, i, std::min(detail::kSweepBlock, stop - i),
                                                 inv_scale, max_tail, scratch, partial[t]);
            }
        });
    for (auto& th : pool) th.join();
    for (const auto& pf : partial) {
        fold.discrete_over = std::max(fold.discrete_over, pf.discrete_over);
        fold.discrete_under = std::max(fold.discrete_under, pf.discrete_under);
        fold.causal_pairs += pf.causal_pairs;
    }
    return fold;
}

// General-dimension counterpart, O(sum of squared cone sizes); callers are
// expected to budget-guard the sample size.
inline DeviationFold pair_deviation_dp(std::span<const Point> pts, double inv_scale) {
    DeviationFold fold;
    const std::size_t n = pts.size();
    if (n < 2) return fold;
    const std::size_t d = pts[0].dim();
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::sort(idx.begin(), idx.end(),
              [&](std::uint32_t a, std::uint32_t b) { return pts[a].coords < pts[b].coords; });
    std::vector<double> flat(n * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) flat[i * d + k] = pts[idx[i]][k];

    auto sq_sep = [&](std::size_t a, std::size_t b) {
        const double dt = flat[b * d] - flat[a * d];
        if (dt <= 0.0) return -1.0;
        double s = dt * dt;
        for (std::size_t k = 1; k < d; ++k) {
            const double dx = flat[b * d + k] - flat[a * d + k];
            s -= dx * dx;
        }
        return s;
    };

    std::vector<std::uint32_t> dp(n);
    std::vector<std::uint8_t> in_cone(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double sij = sq_sep(i, j);
            in_cone[j] = sij > 0.0;
            if (!in_cone[j]) continue;
            std::uint32_t best = 0;
            for (std::size_t k = i + 1; k < j; ++k) {
                if (!in_cone[k] || dp[k] <= best) continue;
                if (sq_sep(k, j) > 0.0) best = dp[k];
            }
            dp[j] = best + 1;
            const double discrete = static_cast<double>(best) * inv_scale;
            const double dist = std::sqrt(sij);
            fold.discrete_over = std::max(fold.discrete_over, discrete - dist);
            fold.discrete_under = std::max(fold.discrete_under, dist - discrete);
            ++fold.causal_pairs;
        }
    }
    return fold;
}

} // namespace causetlab
