#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "histwalk/analysis.hpp"
#include "histwalk/classical_walk.hpp"
#include "histwalk/errors.hpp"

#include <cmath>
#include <random>

using namespace histwalk;

namespace {

Distribution make_dist(int t, int L, std::vector<std::pair<int, double>> mass) {
    Distribution d{t, L, RealVector::Zero(2 * L + 1)};
    for (auto [x, p] : mass) d.p(x + L) = p;
    return d;
}

}  // namespace

TEST_CASE("variance_series matches closed forms") {
    // two-point distribution at +-x has variance x^2
    std::vector<Distribution> dists;
    for (int t = 0; t <= 3; ++t)
        dists.push_back(make_dist(t, 5, {{-t, 0.5}, {t, 0.5}}));
    const TimeSeries v = variance_series(dists);
    for (int t = 0; t <= 3; ++t) CHECK(v.values[t] == doctest::Approx(t * t).epsilon(1e-14));

    // binomial spread grows linearly
    std::vector<Distribution> walks;
    for (int T : {2, 6, 12}) walks.push_back(binomial_distribution(T));
    const TimeSeries bv = variance_series(walks);
    CHECK(bv.values[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(bv.values[1] == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(bv.values[2] == doctest::Approx(12.0).epsilon(1e-12));

    // shifted mass keeps variance translation invariant
    const TimeSeries off = variance_series({make_dist(0, 6, {{2, 0.5}, {4, 0.5}})});
    CHECK(off.values[0] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("quadratic fit recovers exact polynomials") {
    TimeSeries series;
    const double a = 0.37, b = -1.2, c = 4.5;
    for (int t = 0; t <= 30; ++t) series.values.push_back(a * t * t + b * t + c);
    const QuadraticFit fit = fit_quadratic(series);
    CHECK(fit.a == doctest::Approx(a).epsilon(1e-10));
    CHECK(fit.b == doctest::Approx(b).epsilon(1e-10));
    CHECK(fit.c == doctest::Approx(c).epsilon(1e-10));
    CHECK(fit.rss < 1e-16);
    CHECK(fit.t_min == 0);
    CHECK(fit.t_max == 30);

    const QuadraticFit windowed = fit_quadratic(series, 5, 15);
    CHECK(windowed.a == doctest::Approx(a).epsilon(1e-10));
    CHECK(windowed.t_min == 5);
    CHECK(windowed.t_max == 15);

    CHECK_THROWS_AS(fit_quadratic(series, 10, 11), config_error);
    CHECK_THROWS_AS(fit_quadratic(series, -2, 10), config_error);
    CHECK_THROWS_AS(fit_quadratic(series, 0, 99), config_error);
}

TEST_CASE("quadratic fit separates windows of a piecewise series") {
    TimeSeries series;
    for (int t = 0; t <= 40; ++t)
        series.values.push_back(t <= 20 ? 2.0 * t * t : 800.0);  // growth then plateau
    const QuadraticFit early = fit_quadratic(series, 0, 20);
    CHECK(early.a == doctest::Approx(2.0).epsilon(1e-10));
    const QuadraticFit late = fit_quadratic(series, 21, 40);
    CHECK(late.a == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(late.c == doctest::Approx(800.0).epsilon(1e-10));
}

TEST_CASE("probability series picks the requested site") {
    std::vector<Distribution> dists;
    for (int t = 0; t <= 4; ++t)
        dists.push_back(make_dist(t, 3, {{0, 0.1 * t}, {1, 1.0 - 0.1 * t}}));
    const TimeSeries at0 = probability_series(dists, 0);
    for (int t = 0; t <= 4; ++t) CHECK(at0.values[t] == doctest::Approx(0.1 * t));
    CHECK(at0.x_star == 0);
    const TimeSeries at2 = probability_series(dists, 2);
    CHECK(at2.values[3] == 0.0);
    CHECK_THROWS_AS(probability_series(dists, 9), config_error);
    CHECK_THROWS_AS(probability_series({}, 0), config_error);
}

TEST_CASE("autocorrelation matches a tiny hand computation") {
    TimeSeries series;
    series.values = {1.0, 2.0, 3.0};
    const TimeSeries corr = autocorrelation(series);
    REQUIRE(corr.length() == 3);
    CHECK(corr.values[0] == doctest::Approx(14.0));
    CHECK(corr.values[1] == doctest::Approx(8.0));
    CHECK(corr.values[2] == doctest::Approx(3.0));

    TimeSeries constant;
    constant.values.assign(5, 2.0);
    const TimeSeries cc = autocorrelation(constant);
    for (int tau = 0; tau <= 4; ++tau)
        CHECK(cc.values[tau] == doctest::Approx(4.0 * (5 - tau)));

    TimeSeries tooShort;
    tooShort.values = {1.0};
    CHECK_THROWS_AS(autocorrelation(tooShort), config_error);
}

TEST_CASE("power-law fit recovers synthetic parameters") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> draw_a(0.0, 5.0), draw_b(0.5, 10.0),
        draw_g(0.1, 3.0);
    int recovered = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double a = draw_a(rng), b = draw_b(rng), g = draw_g(rng);
        TimeSeries corr;
        corr.values.push_back(a + b);  // tau = 0 placeholder, outside the window
        for (int tau = 1; tau <= 60; ++tau)
            corr.values.push_back(a + b * std::pow(double(tau), -g));
        const PowerLawFit fit = fit_power_law(corr, true, 2, 60);
        const bool ok = std::abs(fit.gamma - g) < 1e-3 * std::max(1.0, g) &&
                        std::abs(fit.b - b) < 1e-2 * std::max(1.0, b) &&
                        std::abs(fit.a - a) < 1e-2 * std::max(1.0, a);
        if (ok) ++recovered;
    }
    CHECK(recovered >= 95);
}

TEST_CASE("power-law fit works on all lags when asked") {
    TimeSeries corr;
    for (int tau = 0; tau <= 30; ++tau)
        corr.values.push_back(1.5 + 4.0 * std::pow(std::max(tau, 1), -0.8));
    const PowerLawFit fit = fit_power_law(corr, false, 1, 30);
    CHECK(fit.gamma == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(fit.even_only == false);
    CHECK(fit.tau_min == 1);
    CHECK(fit.converged);
}

TEST_CASE("power-law fit rejects windows that are too thin") {
    TimeSeries corr;
    for (int tau = 0; tau <= 10; ++tau) corr.values.push_back(1.0 / (tau + 1));
    CHECK_THROWS_AS(fit_power_law(corr, true, 2, 10), config_error);  // 5 even lags
    CHECK_NOTHROW(fit_power_law(corr, false, 2, 10));                 // 9 lags
    CHECK_THROWS_AS(fit_power_law(corr, false, 0, 10), config_error);
    CHECK_THROWS_AS(fit_power_law(corr, false, 1, 99), config_error);
}

TEST_CASE("find_peaks on hand-built shapes") {
    // single interior bump
    const Distribution uni =
        make_dist(0, 4, {{-2, 0.1}, {0, 0.6}, {2, 0.2}, {4, 0.1}});
    CHECK(find_peaks(uni) == std::vector<int>{0});

    // twin bumps with a valley between
    const Distribution bi = make_dist(
        0, 6, {{-4, 0.3}, {-2, 0.1}, {0, 0.05}, {2, 0.15}, {4, 0.4}});
    CHECK(find_peaks(bi) == std::vector<int>{-4, 4});

    // monotone ramps peak only at the edge, which never counts
    const Distribution ramp =
        make_dist(0, 3, {{-2, 0.1}, {0, 0.3}, {2, 0.6}});
    CHECK(find_peaks(ramp).empty());

    // the shallow wiggle around -4..0 (depth 1e-4) only counts at low
    // prominence; the bump at +4 survives both thresholds
    const Distribution faint = make_dist(
        0, 6, {{-4, 0.2}, {-2, 0.1999}, {0, 0.2}, {2, 0.1}, {4, 0.3001}});
    CHECK(find_peaks(faint, 1e-3) == std::vector<int>{4});
    CHECK(find_peaks(faint, 1e-5) == std::vector<int>{-4, 0, 4});
}

TEST_CASE("find_peaks respects the populated parity class") {
    // even-parity support with zero-filled odd sites: the zeros must not be
    // treated as separating minima
    const Distribution d = make_dist(
        10, 8, {{-6, 0.05}, {-4, 0.3}, {-2, 0.1}, {0, 0.1}, {2, 0.1}, {4, 0.3},
                {6, 0.05}});
    CHECK(find_peaks(d) == std::vector<int>{-4, 4});

    // once the other parity carries real mass, every site participates
    Distribution full = d;
    full.p(d.index(1)) = 0.2;
    const auto peaks = find_peaks(full);
    CHECK(std::find(peaks.begin(), peaks.end(), 1) != peaks.end());
}

TEST_CASE("bifurcation sweep finds the merge point") {
    // synthetic family: two bumps that merge into one as g grows past 0.5
    auto family = [](double g) {
        if (g < 0.5)
            return make_dist(0, 6,
                             {{-6, 0.01}, {-4, 0.4}, {-2, 0.1}, {0, 0.05}, {2, 0.1},
                              {4, 0.4}, {6, 0.01}});
        return make_dist(0, 6, {{-2, 0.2}, {0, 0.5}, {2, 0.2}});
    };
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(0.1 * i);
    const BifurcationResult res = bifurcation_sweep(grid, family, 1e-4, 1);
    CHECK(res.transition_found);
    CHECK(res.gamma_star == doctest::Approx(0.45).epsilon(1e-12));
    REQUIRE(res.peaks.size() == grid.size());
    CHECK(res.peaks.front().size() == 2);
    CHECK(res.peaks.back().size() == 1);

    const BifurcationResult par = bifurcation_sweep(grid, family, 1e-4, 4);
    CHECK(par.gamma_star == doctest::Approx(res.gamma_star));

    // no transition when every point is bimodal
    auto stuck = [&](double) { return family(0.1); };
    CHECK_FALSE(bifurcation_sweep(grid, stuck, 1e-4, 1).transition_found);

    CHECK_THROWS_AS(bifurcation_sweep({-0.5}, family, 1e-4, 1), config_error);
}

TEST_CASE("gamma sweep composes the correlation pipeline") {
    // model whose site-0 weight decays as a power law controlled by lambda
    auto model = [](double lambda) {
        std::vector<Distribution> dists;
        const double g = 0.5 + lambda;
        for (int t = 0; t <= 60; ++t) {
            const double p0 = std::pow(double(t + 1), -g);
            dists.push_back(make_dist(t, 2, {{0, p0}, {2, 1.0 - p0}}));
        }
        return dists;
    };
    const auto points = gamma_sweep({0.0, 0.25, 0.5}, model, 0, 2);
    REQUIRE(points.size() == 3);
    for (const auto& pt : points) {
        CHECK(pt.fit.even_only);
        CHECK(pt.fit.tau_min == 2);
        CHECK(pt.fit.tau_max == 60);
        CHECK(pt.fit.gamma > 0.0);
    }
    // steeper single-site decay produces a larger fitted exponent
    CHECK(points[0].fit.gamma < points[2].fit.gamma);

    CHECK_THROWS_AS(gamma_sweep({2.0}, model, 0, 1), config_error);
}
