#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace causetlab {

// A spacetime event. coords[0] is the time coordinate, coords[1..d-1] the
// spatial ones; all computations require matching dimension.
struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(std::initializer_list<double> c) : coords(c) {}

    std::size_t dim() const { return coords.size(); }
    double time() const { return coords[0]; }
    double& operator[](std::size_t i) { return coords[i]; }
    double operator[](std::size_t i) const { return coords[i]; }

    friend bool operator==(const Point& a, const Point& b) { return a.coords == b.coords; }
};

namespace detail {

inline void require_same_dim(const Point& x, const Point& y) {
    if (x.dim() != y.dim() || x.dim() == 0)
        throw std::invalid_argument("points must share a dimension d >= 1");
}

} // namespace detail

// Causal distance: sqrt(max{0, dt^2 - |dx|^2}) for future-directed
// separations, 0 whenever dt <= 0. Exactly-null pairs count as unrelated.
inline double causal_distance(const Point& x, const Point& y) {
    detail::require_same_dim(x, y);
    const double dt = y[0] - x[0];
    if (dt <= 0.0) return 0.0;
    double s = dt * dt;
    for (std::size_t i = 1; i < x.dim(); ++i) {
        const double dxi = y[i] - x[i];
        s -= dxi * dxi;
    }
    return s > 0.0 ? std::sqrt(s) : 0.0;
}

inline bool causally_precedes(const Point& x, const Point& y) {
    detail::require_same_dim(x, y);
    if (x == y) return true;
    return causal_distance(x, y) > 0.0;
}

// The open interval (x, y): everything strictly in x's future and y's past.
struct IntervalSpec {
    Point past;
    Point future;
    double proper_time = 0.0;
};

inline IntervalSpec make_interval(Point past, Point future) {
    const double tau = causal_distance(past, future);
    return IntervalSpec{std::move(past), std::move(future), tau};
}

// The diamond <0, tau> sitting at the origin with a purely timelike tip.
inline IntervalSpec standard_diamond(std::size_t d, double tau) {
    Point past(std::vector<double>(d, 0.0));
    Point future(std::vector<double>(d, 0.0));
    future[0] = tau;
    return make_interval(std::move(past), std::move(future));
}

inline bool interval_contains(const IntervalSpec& iv, const Point& p) {
    return causal_distance(iv.past, p) > 0.0 && causal_distance(p, iv.future) > 0.0;
}

// Lebesgue measure of the standard unit diamond: two cones of height 1/2
// over a (d-1)-ball of radius 1/2, in closed form.
inline double diamond_constant(std::size_t d) {
    if (d == 0) throw std::invalid_argument("diamond_constant: d must be >= 1");
    const double k = static_cast<double>(d) - 1.0;
    const double unit_ball = std::pow(std::numbers::pi, k / 2.0) / std::tgamma(k / 2.0 + 1.0);
    return unit_ball * std::pow(0.5, k) / static_cast<double>(d);
}

inline double interval_volume(const IntervalSpec& iv) {
    if (iv.proper_time <= 0.0) return 0.0;
    return diamond_constant(iv.past.dim()) * std::pow(iv.proper_time, static_cast<double>(iv.past.dim()));
}

// Poincare map T(p) = boost_velocity(p + translation): a translation followed
// by a pure Lorentz boost. |velocity| < 1 strictly.
class Boost {
  public:
    Boost(std::vector<double> translation, std::vector<double> velocity)
        : translation_(std::move(translation)), velocity_(std::move(velocity)) {
        if (translation_.empty() || velocity_.size() + 1 != translation_.size())
            throw std::invalid_argument("boost: velocity must have length d-1");
        double b2 = 0.0;
        for (double v : velocity_) b2 += v * v;
        if (!(b2 < 1.0)) throw std::invalid_argument("boost: |velocity| must be < 1");
        beta_sq_ = b2;
        gamma_ = 1.0 / std::sqrt(1.0 - b2);
    }

    static Boost identity(std::size_t d) {
        return Boost(std::vector<double>(d, 0.0), std::vector<double>(d - 1, 0.0));
    }

    std::size_t dim() const { return translation_.size(); }
    const std::vector<double>& translation() const { return translation_; }
    const std::vector<double>& velocity() const { return velocity_; }

    Point apply(const Point& p) const {
        if (p.dim() != dim()) throw std::invalid_argument("boost: dimension mismatch");
        Point q = p;
        for (std::size_t i = 0; i < q.dim(); ++i) q[i] += translation_[i];
        return pure_boost(q, velocity_, beta_sq_, gamma_);
    }

    // T^-1(q) = B_{-v}(q) - translation, re-expressed in translate-then-boost
    // form: translation' = B_{v}(-translation), velocity' = -velocity.
    Boost inverse() const {
        Point neg_a(translation_);
        for (auto& c : neg_a.coords) c = -c;
        Point shifted = pure_boost(neg_a, velocity_, beta_sq_, gamma_);
        std::vector<double> neg_v = velocity_;
        for (auto& v : neg_v) v = -v;
        return Boost(std::move(shifted.coords), std::move(neg_v));
    }

  private:
    static Point pure_boost(const Point& p, const std::vector<double>& beta, double beta_sq,
                            double gamma) {
        if (beta_sq == 0.0) return p;
        double bdotx = 0.0;
        for (std::size_t i = 1; i < p.dim(); ++i) bdotx += beta[i - 1] * p[i];
        Point q = p;
        q[0] = gamma * (p[0] - bdotx);
        const double spatial_coef = (gamma - 1.0) * bdotx / beta_sq - gamma * p[0];
        for (std::size_t i = 1; i < p.dim(); ++i) q[i] = p[i] + spatial_coef * beta[i - 1];
        return q;
    }

    std::vector<double> translation_;
    std::vector<double> velocity_;
    double beta_sq_ = 0.0;
    double gamma_ = 1.0;
};

// The transform taking iv.past to the origin and iv.future to
// (proper_time, 0, ..., 0). Requires timelike endpoints.
inline Boost boost_to_diamond(const IntervalSpec& iv) {
    if (!(iv.proper_time > 0.0))
        throw std::invalid_argument("boost_to_diamond: endpoints must be timelike separated");
    const std::size_t d = iv.past.dim();
    std::vector<double> translation(d);
    for (std::size_t i = 0; i < d; ++i) translation[i] = -iv.past[i];
    const double dt = iv.future[0] - iv.past[0];
    std::vector<double> velocity(d - 1);
    for (std::size_t i = 1; i < d; ++i) velocity[i - 1] = (iv.future[i] - iv.past[i]) / dt;
    return Boost(std::move(translation), std::move(velocity));
}

inline IntervalSpec boost_interval(const Boost& T, const IntervalSpec& iv) {
    return make_interval(T.apply(iv.past), T.apply(iv.future));
}

} // namespace causetlab
