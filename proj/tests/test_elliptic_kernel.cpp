#include <catch_amalgamated.hpp>

#include <crheat/elliptic_kernel.hpp>

#include <cmath>
#include <random>

using namespace crheat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// eigenfunction expansion in mpmath, tools/oracles.py
constexpr double PS_1_1_n1 = 0.075454955097707196;
constexpr double PS_2_05_n2 = 0.010472240959384393;
constexpr double PS_03_025_n3 = 0.42409455704048112;

TEST_CASE("P_S against mpmath") {
    REQUIRE_THAT(eval_PS(1.0, 1.0, 1), WithinRel(PS_1_1_n1, 1e-12));
    REQUIRE_THAT(eval_PS(2.0, 0.5, 2), WithinRel(PS_2_05_n2, 1e-12));
    REQUIRE_THAT(eval_PS(0.3, 0.25, 3), WithinRel(PS_03_025_n3, 1e-12));
}

TEST_CASE("theta series agrees with the eigenfunction expansion") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> G(0.0, pi), T(0.2, spectral_switch_time);
    for (int i = 0; i < 30; ++i) {
        double g = G(rng), t = T(rng);
        for (int n : {1, 2, 3}) {
            double s = eval_PS_spectral(g, t, n);
            REQUIRE_THAT(eval_PS(g, t, n), WithinRel(s, 1e-10));
        }
    }
}

TEST_CASE("P_S is positive, finite at the endpoints and continuous at pi/2") {
    for (int n : {1, 2, 3})
        for (double t : {0.05, 0.5, 2.0}) {
            REQUIRE(eval_PS(0.0, t, n) > 0.0);
            REQUIRE(eval_PS(pi, t, n) > 0.0);
            REQUIRE(std::isfinite(eval_PS(pi, t, n)));
            double a = eval_PS(pi / 2, t, n), b = eval_PS(std::nextafter(pi / 2, 4.0), t, n);
            REQUIRE_THAT(a, WithinRel(b, 1e-12));
        }
}

TEST_CASE("P_S has unit mass") {
    for (int n : {1, 2, 3})
        for (double t : {0.1, 1.0})
            REQUIRE_THAT(integrate_zonal([&](double x) { return eval_PS(std::acos(x), t, n); }, n, 1e-12),
                         WithinAbs(1.0, 1e-9));
}

TEST_CASE("P_S tends to the uniform density") {
    for (int n : {1, 2, 3})
        REQUIRE_THAT(eval_PS(1.3, 30.0, n), WithinRel(1.0 / sphere_area(n), 1e-10));
}

TEST_CASE("small-time ratio to the leading term") {
    for (int n : {1, 2, 3})
        for (double g : {0.5, 1.0, 2.0}) {
            const double t = 0.02;
            double r = eval_PS(g, t, n) / eval_PS_asymptotic(g, t, n);
            REQUIRE(std::abs(r - 1.0) < 5 * t * n);
        }
    // hand-computed leading term at gamma = pi/2, t = 0.1, n = 1
    double expect = std::pow(0.2 * pi, -1.5) * std::exp(-pi * pi / 0.8) * (pi / 2);
    REQUIRE_THAT(eval_PS_asymptotic(pi / 2, 0.1, 1), WithinRel(expect, 1e-14));
}

TEST_CASE("P_S input errors") {
    REQUIRE_THROWS_AS(eval_PS(-0.1, 1.0, 1), DomainError);
    REQUIRE_THROWS_AS(eval_PS(3.2, 1.0, 1), DomainError);
    REQUIRE_THROWS_AS(eval_PS(1.0, 0.0, 1), DomainError);
    REQUIRE_THROWS_AS(eval_PS(1.0, 1.0, 0), DomainError);
    REQUIRE_THROWS_AS(eval_PS(1.0, 2.0, 1, SeriesSpec{1, 1e-14}), SpecTooSmall);
    REQUIRE_NOTHROW(eval_PS(1.0, 2.0, 1, SeriesSpec{3, 1e-14}));
    REQUIRE(ps_tail_bound(2.0, 3) < ps_tail_bound(2.0, 2));
}
