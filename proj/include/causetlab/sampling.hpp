#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "causetlab/geometry.hpp"
#include "causetlab/rng.hpp"

namespace causetlab {

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dim() const { return lo.size(); }

    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }

    bool contains(const Point& p) const {
        if (p.dim() != dim()) return false;
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }
};

// Sampling region: a box, an interval, or the image of a box under boosts.
// Boxes are not boost-closed, so the image keeps the maps back to the base
// frame (boost composition is generally boost-plus-rotation, hence a chain).
struct BoxImage {
    Box base;
    std::vector<Boost> to_base; // applied in order to reach base coordinates

    bool contains(Point p) const {
        for (const auto& m : to_base) p = m.apply(p);
        return base.contains(p);
    }
};

using Region = std::variant<Box, IntervalSpec, BoxImage>;

inline bool region_contains(const Region& region, const Point& p) {
    return std::visit(
        [&](const auto& r) -> bool {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Box>) {
                return r.contains(p);
            } else if constexpr (std::is_same_v<T, IntervalSpec>) {
                return interval_contains(r, p);
            } else {
                return r.contains(p);
            }
        },
        region);
}

inline double region_volume(const Region& region) {
    return std::visit(
        [](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Box>) {
                return r.volume();
            } else if constexpr (std::is_same_v<T, IntervalSpec>) {
                return interval_volume(r);
            } else {
                return r.base.volume();
            }
        },
        region);
}

// One realized Poisson sample: density, region, RNG identity, and points
// sorted by time (ties broken lexicographically on the remaining coords).
struct CausetSample {
    std::vector<Point> points;
    double density = 0.0;
    Region region;
    RngSpec seed_path;

    std::size_t size() const { return points.size(); }
    std::size_t dim() const {
        return std::visit([](const auto& r) -> std::size_t {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Box>) return r.dim();
            else if constexpr (std::is_same_v<T, IntervalSpec>) return r.past.dim();
            else return r.base.dim();
        }, region);
    }
};

namespace detail {

inline bool point_less(const Point& a, const Point& b) {
    return a.coords < b.coords; // lexicographic, time coordinate first
}

inline void sort_points(std::vector<Point>& pts) {
    std::sort(pts.begin(), pts.end(), point_less);
}

} // namespace detail

// Poisson(lambda * |box|) points, i.i.d. uniform in the box.
inline CausetSample sample_box(double lambda, const Box& box, RngSpec rng_spec) {
    if (lambda <= 0.0) throw std::invalid_argument("sample_box: lambda must be positive");
    const double vol = box.volume();
    if (!(vol > 0.0) || !std::isfinite(vol))
        throw std::invalid_argument("sample_box: box must have positive finite volume");
    RngStream rng(rng_spec);
    const std::uint64_t count = rng.poisson(lambda * vol);
    std::vector<Point> pts;
    pts.reserve(count);
    const std::size_t d = box.dim();
    for (std::uint64_t k = 0; k < count; ++k) {
        Point p = Point(std::vector<double>(d));
        for (std::size_t i = 0; i < d; ++i) p[i] = rng.uniform(box.lo[i], box.hi[i]);
        pts.push_back(std::move(p));
    }
    detail::sort_points(pts);
    return CausetSample{std::move(pts), lambda, box, rng_spec};
}

namespace detail {

// Uniform points in the standard diamond <0, tau>. d = 2 samples the
// light-cone square (u, v) = (t - x, t + x) directly; higher d rejects from
// the bounding box, acceptance rate C_d.
inline std::vector<Point> uniform_in_standard_diamond(std::size_t d, double tau,
                                                      std::uint64_t count, RngStream& rng) {
    std::vector<Point> pts;
    pts.reserve(count);
    if (d == 2) {
        for (std::uint64_t k = 0; k < count; ++k) {
            const double u = rng.uniform(0.0, tau);
            const double v = rng.uniform(0.0, tau);
            pts.push_back(Point{0.5 * (u + v), 0.5 * (v - u)});
        }
        return pts;
    }
    const IntervalSpec diamond = standard_diamond(d, tau);
    while (pts.size() < count) {
        Point p = Point(std::vector<double>(d));
        p[0] = rng.uniform(0.0, tau);
        for (std::size_t i = 1; i < d; ++i) p[i] = rng.uniform(-tau / 2.0, tau / 2.0);
        if (interval_contains(diamond, p)) pts.push_back(std::move(p));
    }
    return pts;
}

} // namespace detail

// Poisson(lambda * C_d * tau^d) points, uniform in the interval. An empty
// (null or degenerate) interval yields an empty sample.
inline CausetSample sample_interval(double lambda, const IntervalSpec& iv, RngSpec rng_spec) {
    if (lambda <= 0.0) throw std::invalid_argument("sample_interval: lambda must be positive");
    const double vol = interval_volume(iv);
    if (vol <= 0.0) return CausetSample{{}, lambda, iv, rng_spec};

    RngStream rng(rng_spec);
    const std::uint64_t count = rng.poisson(lambda * vol);
    const std::size_t d = iv.past.dim();
    std::vector<Point> pts = detail::uniform_in_standard_diamond(d, iv.proper_time, count, rng);

    // Map from the rest frame back to the interval's frame.
    bool standard = true;
    for (std::size_t i = 1; i < d; ++i)
        if (iv.future[i] != iv.past[i]) standard = false;
    if (standard) {
        for (auto& p : pts)
            for (std::size_t i = 0; i < d; ++i) p[i] += iv.past[i];
    } else {
        const Boost from_rest = boost_to_diamond(iv).inverse();
        for (auto& p : pts) p = from_rest.apply(p);
    }
    detail::sort_points(pts);
    return CausetSample{std::move(pts), lambda, iv, rng_spec};
}

// Image of a sample under a Poincare transform; the region is carried along.
inline CausetSample boost_sample(const CausetSample& s, const Boost& T) {
    CausetSample out;
    out.density = s.density;
    out.seed_path = s.seed_path;
    out.points.reserve(s.points.size());
    for (const auto& p : s.points) out.points.push_back(T.apply(p));
    detail::sort_points(out.points);
    out.region = std::visit(
        [&](const auto& r) -> Region {
            using Rt = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<Rt, Box>) {
                return BoxImage{r, {T.inverse()}};
            } else if constexpr (std::is_same_v<Rt, IntervalSpec>) {
                return boost_interval(T, r);
            } else {
                BoxImage img = r;
                img.to_base.insert(img.to_base.begin(), T.inverse());
                return img;
            }
        },
        s.region);
    return out;
}

// Keeps each point independently with the given probability; used by the
// thinning consistency checks.
inline CausetSample thin_sample(const CausetSample& s, double keep_probability, RngSpec rng_spec) {
    if (keep_probability < 0.0 || keep_probability > 1.0)
        throw std::invalid_argument("thin_sample: probability out of range");
    RngStream rng(rng_spec);
    CausetSample out = s;
    out.points.clear();
    for (const auto& p : s.points)
        if (rng.bernoulli(keep_probability)) out.points.push_back(p);
    out.density = s.density * keep_probability;
    return out;
}

} // namespace causetlab
