#include <catch_amalgamated.hpp>

#include "causetlab/chainstats.hpp"
#include "causetlab/stats.hpp"

using namespace causetlab;

TEST_CASE("chi-square tail anchors") {
    // df = 2 has the closed form exp(-x/2)
    for (double x : {0.5, 2.0, 7.3}) CHECK(stats::chi2_sf(x, 2) == Catch::Approx(std::exp(-x / 2)));
    // standard table values
    CHECK(stats::chi2_sf(3.841458820694124, 1) == Catch::Approx(0.05).epsilon(1e-6));
    CHECK(stats::chi2_sf(18.307038053275143, 10) == Catch::Approx(0.05).epsilon(1e-6));
    CHECK(stats::chi2_sf(6.251388631170325, 3) == Catch::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("wilson interval anchor") {
    // k=8, n=10, z=1.96: standard worked example
    const auto w = stats::wilson(8, 10, 1.959963984540054);
    CHECK(w.lo == Catch::Approx(0.4901625).margin(2e-4));
    CHECK(w.hi == Catch::Approx(0.9433476).margin(2e-4));
}

TEST_CASE("deviation bound evaluates the stated expression") {
    SECTION("probability factor") {
        CHECK(deviation_bound(1e6, 2, 2.0, 1.0).probability ==
              Catch::Approx(16.0 * std::exp(-4.0)).epsilon(1e-12));
        CHECK(deviation_bound(1e6, 2, 3.0, 1.0).probability ==
              Catch::Approx(36.0 * std::exp(-9.0)).epsilon(1e-12));
    }
    SECTION("threshold arithmetic") {
        const auto b = deviation_bound(1e6, 2, 2.0, 1.0);
        // 2 * 10^1.5 * log(1e6) / loglog(1e6)
        const double want = 2.0 * std::pow(10.0, 1.5) * std::log(1e6) / std::log(std::log(1e6));
        CHECK(b.threshold == Catch::Approx(want).epsilon(1e-12));
        CHECK(b.threshold == Catch::Approx(332.8).margin(0.1));
    }
    SECTION("mu range") {
        CHECK_THROWS_AS(deviation_bound(1e6, 2, 1.5, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(deviation_bound(1e6, 2, 1e4, 1.0), std::invalid_argument);
        // wide window accepted, narrow window flagged
        const double narrow = std::pow(1e6, 0.25) / std::log(std::log(1e6));
        CHECK(deviation_bound(1e6, 2, narrow - 0.1, 1.0).within_corollary_range);
        CHECK_FALSE(deviation_bound(1e6, 2, narrow + 0.5, 1.0).within_corollary_range);
    }
}

TEST_CASE("height ensembles") {
    SECTION("tiny densities give mostly empty samples") {
        const auto ens = estimate_heights(0.5, 2, 200, {41, 0});
        std::size_t zeros = 0;
        for (auto h : ens.heights) zeros += h == 0;
        CHECK(zeros > 100);
    }
    SECTION("deterministic in the seed and independent of threads") {
        EnsembleOptions two;
        two.threads = 2;
        const auto a = estimate_heights(400.0, 2, 40, {41, 1});
        const auto b = estimate_heights(400.0, 2, 40, {41, 1}, two);
        CHECK(a.heights == b.heights);
    }
    SECTION("budget ceiling") {
        EnsembleOptions opt;
        opt.max_points_per_trial = 100;
        CHECK_THROWS_AS(estimate_heights(1e6, 2, 10, {41, 2}, opt), budget_error);
    }
    SECTION("moment validation") {
        auto ens = estimate_heights(200.0, 2, 50, {41, 3});
        CHECK_NOTHROW(ens.validate());
        ens.mean += 1e-6;
        CHECK_THROWS_AS(ens.validate(), std::invalid_argument);
        CHECK_THROWS_AS(estimate_heights(100.0, 2, 1, {41, 4}), std::invalid_argument);
    }
}

TEST_CASE("tail frequencies at trivial thresholds") {
    const auto curve = tail_experiment(2000.0, 2, 300, {0.0, 1e9}, {42, 0});
    CHECK(curve.points[0].frequency == 1.0);
    CHECK(curve.points[1].frequency == 0.0);
    CHECK_THROWS_AS(tail_experiment(2000.0, 2, 50, {1.0}, {42, 1}), std::invalid_argument);
}

TEST_CASE("tail frequency at two standard deviations obeys Chebyshev") {
    const auto ens = estimate_heights(1e4, 2, 300, {42, 2});
    const auto curve = tail_curve_from(ens, {2.0 * ens.sd});
    CHECK(curve.points[0].frequency <= 0.25);
}

TEST_CASE("c_hat is nondecreasing along a doubling grid") {
    const std::vector<double> grid{1e3, 4e3, 1.6e4};
    std::vector<HeightEnsemble> ens;
    std::uint64_t off = 0;
    for (double l : grid) {
        EnsembleOptions opt;
        opt.stream_offset = off;
        off += 200;
        ens.push_back(estimate_heights(l, 2, 200, {43, 0}, opt));
    }
    for (std::size_t i = 1; i < ens.size(); ++i) {
        const double se =
            2.0 * std::sqrt(ens[i].c_hat_se() * ens[i].c_hat_se() +
                            ens[i - 1].c_hat_se() * ens[i - 1].c_hat_se());
        CHECK(ens[i].c_hat >= ens[i - 1].c_hat - se);
    }
}

TEST_CASE("mean convergence check on a synthetic constant injection") {
    // heights pinned at lambda^{1/2} so c_hat is exactly 1 on every rung
    std::vector<HeightEnsemble> ens;
    for (double lambda : {100.0, 400.0, 1600.0}) {
        HeightEnsemble e;
        e.lambda = lambda;
        e.dim = 2;
        e.trials = 10;
        e.heights.assign(10, static_cast<std::uint32_t>(std::sqrt(lambda)));
        e.recompute_moments();
        ens.push_back(e);
    }
    const auto rep = mean_convergence_check_on(ens);
    CHECK(rep.c_limit == Catch::Approx(1.0).margin(1e-12));
    CHECK(rep.fitted_C == 0.0);
    CHECK(rep.band_satisfied);
    CHECK(rep.extrapolation_reliable);
}

TEST_CASE("mean convergence check input validation") {
    std::vector<HeightEnsemble> two(2);
    CHECK_THROWS_AS(mean_convergence_check_on(two), std::invalid_argument);
}

TEST_CASE("heights are invariant under boosting the sample") {
    const Boost t({0.0, 0.0}, {0.5});
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto sample = sample_interval(1e4, standard_diamond(2, 1.0), {44, s});
        CHECK(height(sample).height == height(boost_sample(sample, t)).height);
    }
}
