#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace causetlab::stats {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::invalid_argument("sd needs at least 2 values");
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

inline WilsonInterval wilson(std::uint64_t successes, std::uint64_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Regularized incomplete gamma functions (series / continued fraction split),
// enough for chi-square tail probabilities.
namespace detail {

inline double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace detail

inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
    return detail::gamma_q_contfrac(a, x);
}

// Upper tail of the chi-square distribution with df degrees of freedom.
inline double chi2_sf(double statistic, double df) {
    return gamma_q(df / 2.0, statistic / 2.0);
}

inline double poisson_pmf(std::uint64_t k, double mean) {
    return std::exp(-mean + static_cast<double>(k) * std::log(mean) -
                    std::lgamma(static_cast<double>(k) + 1.0));
}

// Pearson goodness of fit of observed counts against Poisson(mean), with
// tail bins merged until every expected cell is >= 5. Returns the p-value.
inline double poisson_gof_pvalue(const std::vector<std::uint64_t>& counts, double mean) {
    if (counts.size() < 20) throw std::invalid_argument("poisson_gof: need more trials");
    const double n = static_cast<double>(counts.size());
    const std::uint64_t max_count = *std::max_element(counts.begin(), counts.end());

    // histogram of observed values
    std::vector<double> observed(max_count + 2, 0.0);
    for (auto c : counts) ++observed[c];
    std::vector<double> expected(max_count + 2, 0.0);
    double cum = 0.0;
    for (std::uint64_t k = 0; k <= max_count; ++k) {
        expected[k] = n * poisson_pmf(k, mean);
        cum += expected[k];
    }
    expected[max_count + 1] = std::max(0.0, n - cum); // upper tail lumped

    // merge adjacent cells until expected >= 5
    std::vector<double> obs_m, exp_m;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
        o_acc += observed[k];
        e_acc += expected[k];
        if (e_acc >= 5.0) {
            obs_m.push_back(o_acc);
            exp_m.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (exp_m.empty()) throw std::invalid_argument("poisson_gof: degenerate binning");
        obs_m.back() += o_acc;
        exp_m.back() += e_acc;
    }
    if (obs_m.size() < 2) throw std::invalid_argument("poisson_gof: too few bins");
    double stat = 0.0;
    for (std::size_t i = 0; i < obs_m.size(); ++i) {
        const double diff = obs_m[i] - exp_m[i];
        stat += diff * diff / exp_m[i];
    }
    return chi2_sf(stat, static_cast<double>(obs_m.size() - 1));
}

// Chi-square homogeneity test for two count samples (shared quantile-ish
// binning with expected cells >= 5). Returns the p-value.
inline double two_sample_count_pvalue(const std::vector<std::uint64_t>& a,
                                      const std::vector<std::uint64_t>& b) {
    if (a.size() < 20 || b.size() < 20)
        throw std::invalid_argument("two_sample_count: need more trials");
    std::vector<std::uint64_t> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    // bin edges at pooled deciles, deduplicated
    std::vector<std::uint64_t> edges;
    for (int q = 1; q < 10; ++q) {
        std::uint64_t e = pooled[pooled.size() * q / 10];
        if (edges.empty() || e > edges.back()) edges.push_back(e);
    }
    auto bin_of = [&](std::uint64_t x) {
        return static_cast<std::size_t>(
            std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
    };
    const std::size_t bins = edges.size() + 1;
    std::vector<double> ca(bins, 0.0), cb(bins, 0.0);
    for (auto x : a) ++ca[bin_of(x)];
    for (auto x : b) ++cb[bin_of(x)];

    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double stat = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < bins; ++i) {
        const double tot = ca[i] + cb[i];
        if (tot == 0.0) continue;
        const double ea = tot * na / (na + nb);
        const double eb = tot * nb / (na + nb);
        stat += (ca[i] - ea) * (ca[i] - ea) / ea + (cb[i] - eb) * (cb[i] - eb) / eb;
        ++used;
    }
    if (used < 2) throw std::invalid_argument("two_sample_count: degenerate binning");
    return chi2_sf(stat, static_cast<double>(used - 1));
}

// Chi-square independence test on a joint histogram of two count sequences.
inline double independence_pvalue(const std::vector<std::uint64_t>& a,
                                  const std::vector<std::uint64_t>& b) {
    if (a.size() != b.size() || a.size() < 100)
        throw std::invalid_argument("independence: need paired trials");
    auto edges_for = [](std::vector<std::uint64_t> xs) {
        std::sort(xs.begin(), xs.end());
        std::vector<std::uint64_t> edges;
        for (int q = 1; q < 4; ++q) {
            std::uint64_t e = xs[xs.size() * q / 4];
            if (edges.empty() || e > edges.back()) edges.push_back(e);
        }
        return edges;
    };
    const auto ea = edges_for(a), eb = edges_for(b);
    auto bin = [](const std::vector<std::uint64_t>& edges, std::uint64_t x) {
        return static_cast<std::size_t>(
            std::upper_bound(edges.begin(), edges.end(), x) - edges.begin());
    };
    const std::size_t ra = ea.size() + 1, rb = eb.size() + 1;
    std::vector<double> table(ra * rb, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) ++table[bin(ea, a[i]) * rb + bin(eb, b[i])];
    std::vector<double> rows(ra, 0.0), cols(rb, 0.0);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < rb; ++j) {
            rows[i] += table[i * rb + j];
            cols[j] += table[i * rb + j];
        }
    const double n = static_cast<double>(a.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < rb; ++j) {
            const double e = rows[i] * cols[j] / n;
            if (e < 1e-12) continue;
            const double diff = table[i * rb + j] - e;
            stat += diff * diff / e;
        }
    return chi2_sf(stat, static_cast<double>((ra - 1) * (rb - 1)));
}

struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("least_squares: need >= 2 paired values");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate x");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

} // namespace causetlab::stats
