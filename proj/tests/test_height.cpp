#include <catch_amalgamated.hpp>

#include "causetlab/finite_space.hpp"
#include "causetlab/height.hpp"
#include "causetlab/sampling.hpp"
#include "oracles.hpp"

using namespace causetlab;

namespace {

std::vector<Point> random_points(RngStream& rng, std::size_t n, std::size_t d) {
    std::vector<Point> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point p = Point(std::vector<double>(d));
        p[0] = rng.uniform();
        for (std::size_t k = 1; k < d; ++k) p[k] = rng.uniform(-0.5, 0.5);
        pts.push_back(std::move(p));
    }
    return pts;
}

bool witness_is_chain(const std::vector<Point>& pts, const HeightResult& res) {
    if (res.witness_chain.size() != res.height) return false;
    for (std::size_t i = 1; i < res.witness_chain.size(); ++i) {
        const Point& a = pts[res.witness_chain[i - 1]];
        const Point& b = pts[res.witness_chain[i]];
        if (a == b || !causally_precedes(a, b)) return false;
    }
    return true;
}

} // namespace

TEST_CASE("height of trivial configurations") {
    CHECK(height(std::span<const Point>{}).height == 0);
    const std::vector<Point> chain{{0, 0}, {1, 0}, {2, 0}};
    const auto res = height(std::span(chain));
    CHECK(res.height == 3);
    CHECK(witness_is_chain(chain, res));
}

TEST_CASE("fast path equals brute-force enumeration on small diamonds") {
    RngStream rng({31, 0});
    for (int it = 0; it < 40; ++it) {
        std::vector<Point> pts;
        while (pts.size() < 10) {
            Point p{rng.uniform(), rng.uniform() - 0.5};
            if (interval_contains(standard_diamond(2, 1.0), p)) pts.push_back(std::move(p));
        }
        CHECK(height(std::span(pts)).height == oracles::exhaustive_height(pts));
    }
}

TEST_CASE("dynamic program equals exhaustive enumeration in d = 2 and 3") {
    RngStream rng({32, 0});
    for (int it = 0; it < 100; ++it) {
        const std::size_t d = 2 + it % 2;
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 13);
        const auto pts = random_points(rng, n, d);
        const auto dp = detail::height_dp(std::span(pts));
        CHECK(dp.height == oracles::exhaustive_height(pts));
        CHECK(witness_is_chain(pts, dp));
    }
}

TEST_CASE("light-cone fast path equals the dynamic program on 500 instances") {
    RngStream rng({33, 0});
    for (int it = 0; it < 500; ++it) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 498);
        const auto pts = random_points(rng, n, 2);
        const auto lis = detail::height_lis(std::span(pts));
        const auto dp = detail::height_dp(std::span(pts));
        REQUIRE(lis.height == dp.height);
        CHECK(lis.height == height_reference(std::span(pts)));
        CHECK(witness_is_chain(pts, lis));
    }
}

TEST_CASE("interval height restricts correctly") {
    const auto s = sample_interval(400.0, standard_diamond(2, 1.0), {34, 0});
    REQUIRE(s.size() > 20);
    SECTION("empty restriction") {
        CHECK(interval_height(s, Point{2, 0}, Point{3, 0}).height == 0);
    }
    SECTION("full restriction equals the plain height") {
        CHECK(interval_height(s, Point{0, 0}, Point{1, 0}).height == height(s).height);
    }
    SECTION("filter-then-height on random sub-intervals") {
        RngStream rng({34, 1});
        for (int it = 0; it < 30; ++it) {
            const Point x{rng.uniform(0, 0.4), rng.uniform(-0.2, 0.2)};
            const Point y{rng.uniform(0.6, 1.0), rng.uniform(-0.2, 0.2)};
            const IntervalSpec iv = make_interval(x, y);
            std::vector<Point> kept;
            for (const auto& p : s.points)
                if (interval_contains(iv, p)) kept.push_back(p);
            CHECK(interval_height(s, x, y).height == height(std::span(kept)).height);
        }
    }
}

TEST_CASE("discrete distance formula") {
    SECTION("single 3-chain between endpoints") {
        // lambda = 81, d = 2, c_d = sqrt(2): D = 3 / (sqrt(2) * 9)
        CausetSample s;
        s.density = 81.0;
        s.region = standard_diamond(2, 1.0);
        s.seed_path = {0, 0};
        s.points = {Point{0.3, 0.0}, Point{0.5, 0.05}, Point{0.7, 0.0}};
        const double got =
            discrete_distance(s, Point{0, 0}, Point{1, 0}, kChainConstantD2);
        CHECK(got == Catch::Approx(3.0 / (std::sqrt(2.0) * 9.0)).epsilon(1e-12));
        CHECK(discrete_distance(s, Point{1, 0}, Point{0, 0}, kChainConstantD2) == 0.0);
    }
    SECTION("empty interval gives zero") {
        const auto s = sample_interval(100.0, standard_diamond(2, 1.0), {35, 0});
        CHECK(discrete_distance(s, Point{5, 0}, Point{6, 0}, kChainConstantD2) == 0.0);
    }
}

TEST_CASE("chains concatenate through shared points") {
    // H(x,y) + H(y,z) + 1 <= H(x,z) exactly, on sampled causal triples
    const auto s = sample_interval(800.0, standard_diamond(2, 1.0), {36, 0});
    RngStream rng({36, 1});
    int checked = 0;
    while (checked < 200) {
        const std::size_t a = static_cast<std::size_t>(rng.uniform() * s.size());
        const std::size_t b = static_cast<std::size_t>(rng.uniform() * s.size());
        const std::size_t c = static_cast<std::size_t>(rng.uniform() * s.size());
        const Point &x = s.points[a], &y = s.points[b], &z = s.points[c];
        if (!(x == y) && !(y == z) && causally_precedes(x, y) && causally_precedes(y, z)) {
            const auto hxy = interval_height(s, x, y).height;
            const auto hyz = interval_height(s, y, z).height;
            const auto hxz = interval_height(s, x, z).height;
            CHECK(hxy + hyz + 1 <= hxz);
            ++checked;
        }
    }
}

TEST_CASE("pair deviation sweep equals the per-pair brute force") {
    RngStream rng({37, 0});
    for (int it = 0; it < 12; ++it) {
        const double lambda = 50.0 + 60.0 * it;
        const auto s = sample_interval(lambda, standard_diamond(2, 1.0), {37, 1 + it});
        if (s.size() < 2) continue;
        const double inv_scale = 1.0 / (kChainConstantD2 * std::sqrt(lambda));
        const auto lc = detail::lightcone_order(std::span(s.points));
        const auto fold = pair_deviation_d2(lc, inv_scale);

        double over = 0.0, under = 0.0;
        std::uint64_t pairs = 0;
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (i == j || !causally_precedes(s.points[i], s.points[j])) continue;
                if (s.points[i] == s.points[j]) continue;
                ++pairs;
                const double dist = causal_distance(s.points[i], s.points[j]);
                const double disc =
                    static_cast<double>(interval_height(s, s.points[i], s.points[j]).height) *
                    inv_scale;
                over = std::max(over, disc - dist);
                under = std::max(under, dist - disc);
            }
        CHECK(fold.causal_pairs == pairs);
        CHECK(fold.discrete_over == Catch::Approx(over).margin(1e-12));
        CHECK(fold.discrete_under == Catch::Approx(under).margin(1e-12));

        // threaded fold must agree exactly
        const auto fold2 = pair_deviation_d2(lc, inv_scale, 2);
        CHECK(fold2.discrete_over == fold.discrete_over);
        CHECK(fold2.discrete_under == fold.discrete_under);
        CHECK(fold2.causal_pairs == fold.causal_pairs);

        // and the general-dimension sweep is the same fold
        const auto fold3 = pair_deviation_dp(std::span(s.points), inv_scale);
        CHECK(fold3.discrete_over == Catch::Approx(fold.discrete_over).margin(1e-12));
        CHECK(fold3.discrete_under == Catch::Approx(fold.discrete_under).margin(1e-12));
        CHECK(fold3.causal_pairs == fold.causal_pairs);
    }
}

TEST_CASE("discrete distance matrix matches per-pair heights") {
    for (std::size_t d : {2, 3}) {
        const auto s = sample_interval(d == 2 ? 150.0 : 400.0, standard_diamond(d, 1.0), {38, d});
        const auto mat = discrete_distance_matrix(s, kChainConstantD2);
        const double inv_scale =
            1.0 / (kChainConstantD2 * std::pow(s.density, 1.0 / static_cast<double>(d)));
        REQUIRE(mat.n == s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < s.size(); ++j) {
                if (i == j) continue;
                const double want =
                    causally_precedes(s.points[i], s.points[j]) && !(s.points[i] == s.points[j])
                        ? interval_height(s, s.points[i], s.points[j]).height * inv_scale
                        : 0.0;
                CHECK(mat.at(i, j) == Catch::Approx(want).margin(1e-14));
            }
    }
}
