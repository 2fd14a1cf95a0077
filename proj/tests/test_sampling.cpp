#include <catch_amalgamated.hpp>

#include "causetlab/sampling.hpp"
#include "causetlab/stats.hpp"

using namespace causetlab;

namespace {

const Box kUnitSquare{{0.0, 0.0}, {1.0, 1.0}};

std::vector<std::uint64_t> box_counts(double lambda, const Box& box, std::size_t trials,
                                      std::uint64_t master, std::uint64_t stream0 = 0) {
    std::vector<std::uint64_t> counts(trials);
    for (std::size_t t = 0; t < trials; ++t)
        counts[t] = sample_box(lambda, box, {master, stream0 + t}).size();
    return counts;
}

} // namespace

TEST_CASE("sampling is deterministic per (seed, stream)") {
    const auto a = sample_box(50.0, kUnitSquare, {9, 4});
    const auto b = sample_box(50.0, kUnitSquare, {9, 4});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.points[i] == b.points[i]);

    const auto c = sample_interval(80.0, standard_diamond(3, 1.0), {9, 5});
    const auto d = sample_interval(80.0, standard_diamond(3, 1.0), {9, 5});
    REQUIRE(c.size() == d.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.points[i] == d.points[i]);
}

TEST_CASE("sampling rejects degenerate inputs") {
    CHECK_THROWS_AS(sample_box(5.0, Box{{0, 0}, {0, 1}}, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(sample_box(0.0, kUnitSquare, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(sample_box(-1.0, kUnitSquare, {1, 0}), std::invalid_argument);
}

TEST_CASE("null interval yields an empty sample, not an error") {
    const auto s = sample_interval(100.0, make_interval(Point{0, 0}, Point{1, 1}), {2, 0});
    CHECK(s.size() == 0);
}

TEST_CASE("points are sorted by time and lie in the region") {
    const auto s = sample_interval(300.0, make_interval(Point{0.2, -0.1}, Point{1.4, 0.3}), {3, 0});
    REQUIRE(s.size() > 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(region_contains(s.region, s.points[i]));
        if (i) CHECK(s.points[i - 1].coords < s.points[i].coords);
    }
    const auto b = sample_box(200.0, kUnitSquare, {3, 1});
    for (const auto& p : b.points) CHECK(kUnitSquare.contains(p));
}

TEST_CASE("interval sampling matches the volume law in expectation") {
    // E[count] = lambda * C_d * tau^d
    double sum = 0.0;
    const std::size_t trials = 400;
    for (std::size_t t = 0; t < trials; ++t)
        sum += static_cast<double>(sample_interval(100.0, standard_diamond(2, 1.0), {4, t}).size());
    const double mean = sum / trials;
    CHECK(std::fabs(mean - 50.0) < 3.0 * std::sqrt(50.0 / trials)); // 3 sigma

    sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t)
        sum += static_cast<double>(
            sample_interval(1000.0, standard_diamond(2, 2.0), {5, t}).size());
    CHECK(std::fabs(sum / trials - 2000.0) < 3.0 * std::sqrt(2000.0 / trials));
}

TEST_CASE("poisson counts pass goodness of fit") {
    const auto counts = box_counts(30.0, kUnitSquare, 2000, 21);
    CHECK(stats::poisson_gof_pvalue(counts, 30.0) > 0.01);
}

TEST_CASE("disjoint boxes with distinct streams are independent") {
    const Box left{{0.0, 0.0}, {1.0, 0.5}};
    const Box right{{0.0, 0.5}, {1.0, 1.0}};
    const std::size_t trials = 2000;
    std::vector<std::uint64_t> a(trials), b(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        a[t] = sample_box(50.0, left, {22, 2 * t}).size();
        b[t] = sample_box(50.0, right, {22, 2 * t + 1}).size();
    }
    CHECK(stats::independence_pvalue(a, b) > 0.01);
}

TEST_CASE("thinning halves the density distribution") {
    const std::size_t trials = 1500;
    std::vector<std::uint64_t> thinned(trials), direct(trials);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto full = sample_box(60.0, kUnitSquare, {23, 3 * t});
        thinned[t] = thin_sample(full, 0.5, {23, 3 * t + 1}).size();
        direct[t] = sample_box(30.0, kUnitSquare, {23, 3 * t + 2}).size();
    }
    CHECK(stats::two_sample_count_pvalue(thinned, direct) > 0.01);
}

TEST_CASE("boosting a sample") {
    const auto s = sample_interval(200.0, standard_diamond(2, 1.0), {24, 0});
    SECTION("identity map keeps the points") {
        const auto t = boost_sample(s, Boost::identity(2));
        REQUIRE(t.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i) CHECK(t.points[i] == s.points[i]);
    }
    SECTION("inverse boost returns the original points") {
        const Boost b({0.3, -0.2}, {0.5});
        const auto fwd = boost_sample(s, b);
        const auto back = boost_sample(fwd, b.inverse());
        REQUIRE(back.size() == s.size());
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t k = 0; k < 2; ++k)
                CHECK(std::fabs(back.points[i][k] - s.points[i][k]) <= 1e-10);
    }
    SECTION("image points lie in the image region") {
        const Boost b({0.1, 0.0}, {0.4});
        const auto fwd = boost_sample(s, b);
        for (const auto& p : fwd.points) CHECK(region_contains(fwd.region, p));
        const auto box_fwd = boost_sample(sample_box(100.0, kUnitSquare, {24, 1}), b);
        for (const auto& p : box_fwd.points) CHECK(region_contains(box_fwd.region, p));
    }
}
