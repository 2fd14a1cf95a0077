#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_set>
#include <vector>

#include "causetlab/chainstats.hpp"
#include "causetlab/errors.hpp"
#include "causetlab/finite_space.hpp"
#include "causetlab/geometry.hpp"
#include "causetlab/height.hpp"
#include "causetlab/sampling.hpp"

namespace causetlab {

// Total index maps between two finite causal spaces.
struct MapPair {
    std::vector<std::uint32_t> psi; // space 1 -> space 2
    std::vector<std::uint32_t> phi; // space 2 -> space 1
};

// Worst pairwise disagreement of d1 against d2 pulled back through the map.
inline double distortion(const std::vector<std::uint32_t>& psi, const FiniteCausalSpace& d1,
                         const FiniteCausalSpace& d2) {
    if (psi.size() != d1.n) throw std::invalid_argument("distortion: map must be total");
    for (auto t : psi)
        if (t >= d2.n) throw std::invalid_argument("distortion: image index out of range");
    double worst = 0.0;
    for (std::size_t i = 0; i < d1.n; ++i)
        for (std::size_t j = 0; j < d1.n; ++j) {
            const double diff = std::fabs(d1.at(i, j) - d2.at(psi[i], psi[j]));
            if (diff > worst) worst = diff;
        }
    return worst;
}

struct NoldusResult {
    double distance = 0.0;
    double psi_distortion = 0.0; // min over maps space1 -> space2
    double phi_distortion = 0.0; // min over maps space2 -> space1
    MapPair argmin;
};

namespace detail {

// Minimal distortion over all |to|^|from| total maps, odometer order; the
// first map attaining the minimum is kept.
inline std::pair<double, std::vector<std::uint32_t>> min_distortion_exhaustive(
    const FiniteCausalSpace& from, const FiniteCausalSpace& to, double map_budget) {
    const double total = std::pow(static_cast<double>(to.n), static_cast<double>(from.n));
    if (total > map_budget)
        throw budget_error(
            "noldus_exact: map enumeration exceeds the budget; use the sampled upper-bound "
            "estimator instead");
    std::vector<std::uint32_t> digits(from.n, 0);
    std::vector<std::uint32_t> best_map = digits;
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        const double d = distortion(digits, from, to);
        if (d < best) {
            best = d;
            best_map = digits;
        }
        std::size_t pos = 0;
        while (pos < digits.size()) {
            if (++digits[pos] < to.n) break;
            digits[pos] = 0;
            ++pos;
        }
        if (pos == digits.size()) break;
    }
    return {best, best_map};
}

} // namespace detail

// Exact Noldus distance between finite spaces: the two closeness conditions
// share no variables, so the infimum splits into two independent minimal
// distortions and their max. Intended for spaces of a handful of points.
inline NoldusResult noldus_exact(const FiniteCausalSpace& x1, const FiniteCausalSpace& x2,
                                 double map_budget = 2e6) {
    if (x1.n == 0 || x2.n == 0)
        throw std::invalid_argument("noldus_exact: spaces must be nonempty");
    NoldusResult res;
    auto [psi_d, psi] = detail::min_distortion_exhaustive(x1, x2, map_budget);
    auto [phi_d, phi] = detail::min_distortion_exhaustive(x2, x1, map_budget);
    res.psi_distortion = psi_d;
    res.phi_distortion = phi_d;
    res.distance = std::max(psi_d, phi_d);
    res.argmin = {std::move(psi), std::move(phi)};
    return res;
}

// ---------------------------------------------------------------------------
// The eps-lattice and its bracket construction.

struct LatticeSpec {
    double eps = 0.0;
    IntervalSpec region;
    double h = 0.0;   // timelike height of the region
    double eta = 0.0; // eps^2 / (16 sqrt(d) h)
    std::vector<Point> points;
};

namespace detail {

// Euclidean distance to a rest-frame diamond, reduced to the (t, r) plane
// where the diamond is the triangle (0,0), (h/2, h/2), (h, 0).
inline double distance_to_diamond(const IntervalSpec& q, const Point& p) {
    const std::size_t d = p.dim();
    const double h = q.proper_time;
    const double t = p[0] - q.past[0];
    double r2 = 0.0;
    for (std::size_t i = 1; i < d; ++i) {
        const double dx = p[i] - q.past[i];
        r2 += dx * dx;
    }
    const double r = std::sqrt(r2);
    if (t >= 0.0 && t <= h && r <= std::min(t, h - t)) return 0.0;
    auto seg_dist = [](double px, double py, double ax, double ay, double bx, double by) {
        const double abx = bx - ax, aby = by - ay;
        const double len2 = abx * abx + aby * aby;
        double s = len2 > 0.0 ? ((px - ax) * abx + (py - ay) * aby) / len2 : 0.0;
        s = std::clamp(s, 0.0, 1.0);
        const double dx = px - (ax + s * abx), dy = py - (ay + s * aby);
        return std::sqrt(dx * dx + dy * dy);
    };
    const double half = h / 2.0;
    double best = seg_dist(t, r, 0.0, 0.0, half, half);
    best = std::min(best, seg_dist(t, r, half, half, h, 0.0));
    best = std::min(best, seg_dist(t, r, 0.0, 0.0, h, 0.0));
    return best;
}

inline bool is_rest_frame(const IntervalSpec& iv) {
    for (std::size_t i = 1; i < iv.past.dim(); ++i)
        if (iv.future[i] != iv.past[i]) return false;
    return true;
}

} // namespace detail

// The lattice eta Z^d clipped to the closed eta-neighborhood of the region.
// Built in the region's rest frame (Euclidean balls are frame-dependent);
// boost the interval first if it is not axis-aligned.
inline LatticeSpec build_lattice(const IntervalSpec& q, double eps,
                                 double max_points = 1e6) {
    if (eps <= 0.0) throw std::invalid_argument("build_lattice: eps must be positive");
    if (!(q.proper_time > 0.0)) throw std::invalid_argument("build_lattice: region is empty");
    if (!detail::is_rest_frame(q))
        throw std::invalid_argument(
            "build_lattice: interval must be axis-aligned; boost to its rest frame first");

    const std::size_t d = q.past.dim();
    LatticeSpec lat;
    lat.eps = eps;
    lat.region = q;
    lat.h = q.proper_time;
    lat.eta = eps * eps / (16.0 * std::sqrt(static_cast<double>(d)) * lat.h);

    // inflated bounding box, in lattice units
    std::vector<long long> lo(d), hi(d);
    double estimated = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double c_lo =
            (i == 0 ? q.past[0] : q.past[i] - lat.h / 2.0) - lat.eta;
        const double c_hi =
            (i == 0 ? q.past[0] + lat.h : q.past[i] + lat.h / 2.0) + lat.eta;
        lo[i] = static_cast<long long>(std::floor(c_lo / lat.eta));
        hi[i] = static_cast<long long>(std::ceil(c_hi / lat.eta));
        estimated *= static_cast<double>(hi[i] - lo[i] + 1);
    }
    if (estimated > max_points)
        throw budget_error("build_lattice: lattice would exceed the point budget (eps too small)");

    std::vector<long long> k = lo;
    Point p = Point(std::vector<double>(d));
    for (;;) {
        for (std::size_t i = 0; i < d; ++i) p[i] = lat.eta * static_cast<double>(k[i]);
        if (detail::distance_to_diamond(q, p) <= lat.eta) lat.points.push_back(p);
        std::size_t pos = 0;
        while (pos < d) {
            if (++k[pos] <= hi[pos]) break;
            k[pos] = lo[pos];
            ++pos;
        }
        if (pos == d) break;
    }
    return lat;
}

// Brackets of a point: the nearest lattice site shifted by +-sqrt(d) eta
// along time. Guarantees x in (x_minus, x_plus) with separation 2 sqrt(d) eta.
inline std::pair<Point, Point> bracket_points(const LatticeSpec& lat, const Point& x) {
    const std::size_t d = x.dim();
    const double h = lat.h;
    for (std::size_t i = 0; i < d; ++i) {
        const double c_lo = (i == 0 ? lat.region.past[0] : lat.region.past[i] - h / 2.0) - lat.eta;
        const double c_hi =
            (i == 0 ? lat.region.past[0] + h : lat.region.past[i] + h / 2.0) + lat.eta;
        if (x[i] < c_lo || x[i] > c_hi)
            throw std::invalid_argument("bracket_points: point outside the inflated bounding box");
    }
    Point nearest = Point(std::vector<double>(d));
    for (std::size_t i = 0; i < d; ++i)
        nearest[i] = lat.eta * std::round(x[i] / lat.eta);
    const double shift = std::sqrt(static_cast<double>(d)) * lat.eta;
    Point minus = nearest, plus = nearest;
    minus[0] -= shift;
    plus[0] += shift;
    return {minus, plus};
}

// ---------------------------------------------------------------------------
// Lattice property checks.

struct LatticeCheckReport {
    double eps = 0.0;
    double eta = 0.0;
    std::size_t lattice_size = 0;
    std::size_t probe_count = 0;

    std::uint64_t bracket_violations = 0;   // containment / separation failures
    std::uint64_t monotone_violations = 0;  // bracket ordering d(x+,y-) <= d(x,y) <= d(x-,y+)
    std::uint64_t slack_pairs = 0;          // pairs checked for the eps/4 slack claim
    std::uint64_t slack_violations = 0;     // d(x-,y+) > d(x+,y-) + eps/4 + tol
    double slack_worst_excess = 0.0;

    // spacing claim: nonzero lattice distances vs the stated 4*eta threshold
    // and the quantization threshold eta implied by eta*sqrt(z)
    double min_nonzero_distance = 0.0;
    std::uint64_t spacing_violations_stated = 0;    // below eps^2/(4 sqrt(d) h)
    std::uint64_t spacing_violations_quantized = 0; // below eta
};

namespace detail {

inline std::uint64_t lattice_cell_key(const std::vector<long long>& k) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (long long v : k) {
        std::uint64_t u = static_cast<std::uint64_t>(v);
        for (int b = 0; b < 8; ++b) {
            h ^= (u >> (8 * b)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

// Integer offsets (n, xi) with 0 < n^2 - |xi|^2 < 16: any lattice pair
// closer than 4 eta realizes one of these, so scanning them is an exact
// spacing check (all other nonzero separations are >= 4 eta by quantization).
inline std::vector<std::vector<long long>> small_causal_offsets(std::size_t d) {
    std::vector<std::vector<long long>> offsets;
    std::vector<long long> xi(d - 1, -8);
    for (long long n = 1; n <= 8; ++n) {
        std::fill(xi.begin(), xi.end(), -8);
        for (;;) {
            long long xi2 = 0;
            for (long long c : xi) xi2 += c * c;
            const long long z = n * n - xi2;
            if (z > 0 && z < 16) {
                std::vector<long long> off;
                off.push_back(n);
                off.insert(off.end(), xi.begin(), xi.end());
                offsets.push_back(std::move(off));
            }
            std::size_t pos = 0;
            while (pos < xi.size()) {
                if (++xi[pos] <= 8) break;
                xi[pos] = -8;
                ++pos;
            }
            if (pos == xi.size()) break;
        }
    }
    return offsets;
}

} // namespace detail

// Verifies the bracket and spacing properties of a lattice over a probe grid
// inside the region. The slack claim is measured, not assumed: violations
// are counted and the worst excess reported.
inline LatticeCheckReport lattice_check(const IntervalSpec& q, double eps,
                                        std::size_t probe_per_axis, double max_points = 1e6,
                                        double tol = 1e-9) {
    const LatticeSpec lat = build_lattice(q, eps, max_points);
    const std::size_t d = q.past.dim();
    LatticeCheckReport rep;
    rep.eps = eps;
    rep.eta = lat.eta;
    rep.lattice_size = lat.points.size();

    // probe grid strictly inside the region
    std::vector<Point> probes;
    const double h = lat.h;
    std::vector<std::size_t> steps(d, probe_per_axis);
    std::vector<std::size_t> ix(d, 0);
    Point p = Point(std::vector<double>(d));
    for (;;) {
        for (std::size_t i = 0; i < d; ++i) {
            const double lo = i == 0 ? q.past[0] : q.past[i] - h / 2.0;
            p[i] = lo + h * (static_cast<double>(ix[i]) + 0.5) /
                            static_cast<double>(steps[i]);
        }
        if (interval_contains(q, p)) probes.push_back(p);
        std::size_t pos = 0;
        while (pos < d) {
            if (++ix[pos] < steps[pos]) break;
            ix[pos] = 0;
            ++pos;
        }
        if (pos == d) break;
    }
    rep.probe_count = probes.size();

    // bracket containment and separation per probe
    const double sep = 2.0 * std::sqrt(static_cast<double>(d)) * lat.eta;
    std::vector<Point> minus, plus;
    minus.reserve(probes.size());
    plus.reserve(probes.size());
    for (const auto& x : probes) {
        auto [m, pl] = bracket_points(lat, x);
        const IntervalSpec bracket = make_interval(m, pl);
        bool ok = interval_contains(bracket, x);
        ok = ok && causal_distance(m, pl) <= sep + tol;
        double euclid2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) euclid2 += (pl[i] - m[i]) * (pl[i] - m[i]);
        ok = ok && std::sqrt(euclid2) <= sep + tol;
        if (!ok) ++rep.bracket_violations;
        minus.push_back(std::move(m));
        plus.push_back(std::move(pl));
    }

    // ordered probe pairs: bracket monotonicity and the eps/4 slack claim
    for (std::size_t a = 0; a < probes.size(); ++a)
        for (std::size_t b = 0; b < probes.size(); ++b) {
            if (a == b) continue;
            const double inner = causal_distance(plus[a], minus[b]);
            const double outer = causal_distance(minus[a], plus[b]);
            const double direct = causal_distance(probes[a], probes[b]);
            if (inner > direct + tol || direct > outer + tol) ++rep.monotone_violations;
            ++rep.slack_pairs;
            const double excess = outer - inner - eps / 4.0;
            if (excess > tol) {
                ++rep.slack_violations;
                rep.slack_worst_excess = std::max(rep.slack_worst_excess, excess);
            }
        }

    // exact spacing check via small causal offsets
    std::unordered_set<std::uint64_t> cells;
    cells.reserve(lat.points.size() * 2);
    std::vector<long long> k(d);
    for (const auto& site : lat.points) {
        for (std::size_t i = 0; i < d; ++i)
            k[i] = static_cast<long long>(std::llround(site[i] / lat.eta));
        cells.insert(detail::lattice_cell_key(k));
    }
    const auto offsets = detail::small_causal_offsets(d);
    const double stated = eps * eps / (4.0 * std::sqrt(static_cast<double>(d)) * lat.h);
    long long min_z = -1;
    std::vector<long long> nb(d);
    for (const auto& site : lat.points) {
        for (std::size_t i = 0; i < d; ++i)
            k[i] = static_cast<long long>(std::llround(site[i] / lat.eta));
        for (const auto& off : offsets) {
            for (std::size_t i = 0; i < d; ++i) nb[i] = k[i] + off[i];
            if (!cells.count(detail::lattice_cell_key(nb))) continue;
            long long z = off[0] * off[0];
            for (std::size_t i = 1; i < d; ++i) z -= off[i] * off[i];
            if (min_z < 0 || z < min_z) min_z = z;
            const double dist = lat.eta * std::sqrt(static_cast<double>(z));
            if (dist < stated - tol) ++rep.spacing_violations_stated;
            if (dist < lat.eta - tol) ++rep.spacing_violations_quantized;
        }
    }
    rep.min_nonzero_distance =
        min_z > 0 ? lat.eta * std::sqrt(static_cast<double>(min_z)) : 4.0 * lat.eta;
    return rep;
}

// ---------------------------------------------------------------------------
// Upper-bound estimator for the Noldus distance between a sample and its
// continuum region.

struct DnEstimate {
    double upper_bound = 0.0;           // max of the two map distortions
    double inclusion_distortion = 0.0;  // sample -> region, max |D - d| over sample pairs
    double probe_map_distortion = 0.0;  // region probes -> sample
    double probe_spacing = 0.0;
    double discretization_error = 0.0;  // h * spacing * sqrt(d)
    std::uint64_t fallback_count = 0;   // probes mapped by global nearest point
    std::uint64_t pairs_evaluated = 0;
};

namespace detail {

inline double euclid2(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

} // namespace detail

// Distortion of the two concrete maps: the inclusion of the sample into the
// region, and probe -> nearest sample point inside the probe's bracket
// interval (global nearest as counted fallback). The probe side approximates
// the continuum sup from below; the discretization error is reported
// alongside rather than folded in.
inline DnEstimate estimate_dn_upper(const CausetSample& s, const std::vector<Point>& probes,
                                    double probe_spacing, double c_d,
                                    std::size_t general_dim_pair_budget = 4000) {
    if (s.size() == 0) throw std::invalid_argument("estimate_dn_upper: sample is empty");
    if (c_d <= 0.0) throw std::invalid_argument("estimate_dn_upper: c_d must be positive");
    const std::size_t d = s.dim();
    const double inv_scale =
        1.0 / (c_d * std::pow(s.density, 1.0 / static_cast<double>(d)));

    DnEstimate est;
    est.probe_spacing = probe_spacing;

    // (a) inclusion map: exact all-pairs deviation fold
    detail::LightconeOrder lc;
    if (d == 2) {
        lc = detail::lightcone_order(std::span(s.points));
        const DeviationFold fold = pair_deviation_d2(lc, inv_scale);
        est.inclusion_distortion = fold.distortion();
        est.pairs_evaluated = fold.causal_pairs;
    } else {
        if (s.size() > general_dim_pair_budget)
            throw budget_error("estimate_dn_upper: sample too large for the general-dimension "
                               "pair sweep budget");
        const DeviationFold fold = pair_deviation_dp(std::span(s.points), inv_scale);
        est.inclusion_distortion = fold.distortion();
        est.pairs_evaluated = fold.causal_pairs;
    }

    if (probes.empty()) {
        est.upper_bound = est.inclusion_distortion;
        return est;
    }

    // (b) probe map through bracket intervals
    const double shift = std::sqrt(static_cast<double>(d)) * probe_spacing;
    std::vector<std::uint32_t> image(probes.size());
    for (std::size_t g = 0; g < probes.size(); ++g) {
        Point lo = probes[g], hi = probes[g];
        lo[0] -= shift;
        hi[0] += shift;
        const IntervalSpec bracket = make_interval(lo, hi);
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t best_idx = UINT32_MAX;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (!interval_contains(bracket, s.points[i])) continue;
            const double e2 = detail::euclid2(probes[g], s.points[i]);
            if (e2 < best) {
                best = e2;
                best_idx = static_cast<std::uint32_t>(i);
            }
        }
        if (best_idx == UINT32_MAX) {
            ++est.fallback_count;
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double e2 = detail::euclid2(probes[g], s.points[i]);
                if (e2 < best) {
                    best = e2;
                    best_idx = static_cast<std::uint32_t>(i);
                }
            }
        }
        image[g] = best_idx;
    }

    // discrete distances between the distinct image points
    std::vector<std::uint32_t> distinct = image;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const std::size_t m = distinct.size();
    std::vector<double> dmat(m * m, 0.0);
    auto pos_of = [&](std::uint32_t idx) {
        return static_cast<std::size_t>(
            std::lower_bound(distinct.begin(), distinct.end(), idx) - distinct.begin());
    };
    if (d == 2) {
        // positions of the image points in the light-cone order
        std::vector<std::uint32_t> where(s.size());
        for (std::size_t pos = 0; pos < lc.to_input.size(); ++pos)
            where[lc.to_input[pos]] = static_cast<std::uint32_t>(pos);
        std::vector<std::uint32_t> row;
        std::vector<double> scratch;
        for (std::size_t a = 0; a < m; ++a) {
            detail::source_heights_d2(lc, where[distinct[a]], row, scratch);
            for (std::size_t b = 0; b < m; ++b) {
                const std::uint32_t wb = where[distinct[b]];
                if (row[wb] != UINT32_MAX)
                    dmat[a * m + b] = static_cast<double>(row[wb]) * inv_scale;
            }
        }
    } else {
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b) {
                if (a == b) continue;
                dmat[a * m + b] =
                    static_cast<double>(
                        interval_height(s, s.points[distinct[a]], s.points[distinct[b]]).height) *
                    inv_scale;
            }
    }

    for (std::size_t ga = 0; ga < probes.size(); ++ga)
        for (std::size_t gb = 0; gb < probes.size(); ++gb) {
            if (ga == gb) continue;
            const double want = causal_distance(probes[ga], probes[gb]);
            const double got = dmat[pos_of(image[ga]) * m + pos_of(image[gb])];
            est.probe_map_distortion =
                std::max(est.probe_map_distortion, std::fabs(want - got));
        }

    const double h = std::visit(
        [](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, IntervalSpec>) return r.proper_time;
            else return 0.0;
        },
        s.region);
    est.discretization_error = h * probe_spacing * std::sqrt(static_cast<double>(d));
    est.upper_bound = std::max(est.inclusion_distortion, est.probe_map_distortion);
    return est;
}

// Grid wrapper: probes on a per-axis grid inside the sample's interval
// region (resolution >= 20 per the operation contract).
inline DnEstimate estimate_dn_upper_grid(const CausetSample& s, std::size_t probe_per_axis,
                                         double c_d) {
    if (probe_per_axis < 20)
        throw std::invalid_argument("estimate_dn_upper: probe resolution must be >= 20 per axis");
    const IntervalSpec* q = std::get_if<IntervalSpec>(&s.region);
    if (q == nullptr)
        throw std::invalid_argument("estimate_dn_upper: sample region must be an interval");
    const std::size_t d = s.dim();
    const double h = q->proper_time;
    std::vector<Point> probes;
    std::vector<std::size_t> ix(d, 0);
    Point p = Point(std::vector<double>(d));
    for (;;) {
        for (std::size_t i = 0; i < d; ++i) {
            const double lo = i == 0 ? q->past[0] : q->past[i] - h / 2.0;
            p[i] = lo + h * (static_cast<double>(ix[i]) + 0.5) /
                            static_cast<double>(probe_per_axis);
        }
        if (interval_contains(*q, p)) probes.push_back(p);
        std::size_t pos = 0;
        while (pos < d) {
            if (++ix[pos] < probe_per_axis) break;
            ix[pos] = 0;
            ++pos;
        }
        if (pos == d) break;
    }
    return estimate_dn_upper(s, probes, h / static_cast<double>(probe_per_axis), c_d);
}

// ---------------------------------------------------------------------------
// The convergence-probability bound evaluator.

enum class BoundParse {
    SeparateFactor, // exp(-C2 eps^2 lambda^{1/d} / (log^3 lambda * eps^d))
    SquaredFactor,  // exp(-C2 eps^2 lambda^{1/d} / (log^3 lambda * eps^{2d}))
};

struct TheoremBoundValue {
    double value = 0.0;
    bool within_validity = false; // K_d lambda^{-1/2d} <= eps <= 8 K_d log lambda
};

inline TheoremBoundValue theorem_bound(double eps, double lambda, std::size_t d, double h,
                                       const BoundParams& params,
                                       BoundParse parse = BoundParse::SeparateFactor) {
    if (eps <= 0.0 || lambda <= 1.0 || d == 0 || h <= 0.0)
        throw std::invalid_argument("theorem_bound: inputs must be positive (lambda > 1)");
    params.validate();
    const double dd = static_cast<double>(d);
    const double log_l = std::log(lambda);
    const double eps_pow = parse == BoundParse::SeparateFactor
                               ? std::pow(eps, dd)
                               : std::pow(eps, 2.0 * dd);
    const double exponent =
        params.C2_d * eps * eps * std::pow(lambda, 1.0 / dd) / (log_l * log_l * log_l * eps_pow);
    TheoremBoundValue out;
    out.value = params.C1_d * std::pow(h, 2.0 * dd + 1.0) * std::pow(eps, 2.0 * (1.0 - dd)) *
                std::pow(lambda, 1.0 / dd) * std::exp(-exponent);
    out.within_validity = params.K_d * std::pow(lambda, -1.0 / (2.0 * dd)) <= eps &&
                          eps <= 8.0 * params.K_d * log_l;
    return out;
}

} // namespace causetlab
