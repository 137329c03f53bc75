#include <catch_amalgamated.hpp>

#include <crheat/cr_kernel.hpp>
#include <crheat/parallel.hpp>

#include <cmath>
#include <random>

using namespace crheat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// raw k-series on the original line in mpmath, tools/oracles.py
struct Oracle {
    double theta1, phi1, t;
    int n;
    double value;
};
constexpr Oracle pc_oracles[] = {
    {0.6, 0.9, 0.8, 1, 0.064034926785432218},
    {0.7, 0.5, 1.0, 1, 0.11208729956988739},
    {0.7, 0.5, 1.0, 2, 0.052305486612221774},
    {1.1, 2.3, 0.5, 2, 0.01001666545440664},
};

TEST_CASE("P_C against mpmath") {
    for (const auto& o : pc_oracles) {
        auto kv = eval_PC_series(SpherePoint(o.theta1, o.phi1), o.t, o.n);
        REQUIRE_THAT(kv.value, WithinRel(o.value, 1e-9));
        REQUIRE(kv.remainder_bound < 1e-12);
    }
}

TEST_CASE("both groupings give the same kernel where both are regular") {
    for (auto p : {SpherePoint(0.5, 1.2), SpherePoint(1.0, 2.0), SpherePoint(0.3, 1.6)})
        for (int n : {1, 2}) {
            EvalSpec a, b;
            a.pairing = Pairing::k_minus_k;
            b.pairing = Pairing::k_minus_k_minus_1;
            double va = eval_PC_series(p, 0.7, n, a).value;
            double vb = eval_PC_series(p, 0.7, n, b).value;
            REQUIRE_THAT(va, WithinRel(vb, 1e-8));
        }
}

TEST_CASE("the singular grouping is refused") {
    EvalSpec s;
    s.pairing = Pairing::k_minus_k;
    REQUIRE_THROWS_AS(eval_PC_series(SpherePoint(0.0, pi), 0.5, 1, s), PairingRequired);
    s.pairing = Pairing::k_minus_k_minus_1;
    REQUIRE_THROWS_AS(eval_PC_series(SpherePoint(0.0, 0.0), 0.5, 1, s), PairingRequired);
    s.pairing = Pairing::automatic;
    REQUIRE(eval_PC_series(SpherePoint(0.0, pi), 0.5, 1, s).value > 0.0);
    REQUIRE(eval_PC_series(SpherePoint(0.0, 0.0), 0.5, 1, s).value > 0.0);
}

TEST_CASE("P_C is even in phi1 and has no imaginary part") {
    for (auto [th, ph] : {std::pair{0.4, 0.8}, std::pair{1.2, 2.9}}) {
        double a = eval_PC_series(SpherePoint(th, ph), 0.6, 2).value;
        double b = eval_PC_series(SpherePoint(th, -ph), 0.6, 2).value;
        REQUIRE_THAT(a, WithinRel(b, 1e-12));
        EvalSpec s;
        s.check_reality = true;
        auto kv = eval_PC_series(SpherePoint(th, ph), 0.6, 2, s);
        REQUIRE(std::abs(kv.imag_part) < 1e-9 * kv.value);
        REQUIRE_THAT(kv.value, WithinRel(a, 1e-9));
    }
}

TEST_CASE("P_C is positive across the chart") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> T(0.0, pi / 2), P(-pi + 1e-9, pi), Tm(0.05, 2.0);
    for (int i = 0; i < 30; ++i) {
        SpherePoint p(T(rng), P(rng));
        REQUIRE(eval_PC_series(p, Tm(rng), 1 + i % 3).value > 0.0);
    }
}

TEST_CASE("P_C approaches the uniform density") {
    const double u = 1.0 / sphere_area(2);
    double prev = INFINITY;
    for (double t : {2.0, 4.0, 8.0}) {
        double d = std::abs(eval_PC_series(SpherePoint(0.7, 1.0), t, 2).value - u);
        REQUIRE(d < prev);
        prev = d;
    }
    REQUIRE(prev < 1e-6);
}

TEST_CASE("theta1 = pi/2 does not depend on phi1") {
    double a = eval_PC_series(SpherePoint(pi / 2, 0.3), 0.5, 2).value;
    double b = eval_PC_series(SpherePoint(pi / 2, 2.7), 0.5, 2).value;
    REQUIRE_THAT(a, WithinRel(b, 1e-9));
}

TEST_CASE("contour representation agrees with the series") {
    for (int n : {1, 2}) {
        SpherePoint p(0.7, 0.5);
        double s = eval_PC_series(p, 1.0, n).value;
        for (double alpha : {0.5, 1.0, 2.0}) REQUIRE_THAT(eval_PC_contour(p, 1.0, n, alpha).value, WithinRel(s, 1e-8));
    }
    REQUIRE_THROWS_AS(eval_PC_contour(SpherePoint(0.7, 0.5), 1.0, 1, 0.0), DomainError);
}

TEST_CASE("remainder estimate") {
    REQUIRE(remainder_estimate(1.0, 1, 2, 0.5) < remainder_estimate(1.0, 1, 1, 0.5));
    REQUIRE(remainder_estimate(1.0, 1, 1, 1.0) < remainder_estimate(1.0, 1, 1, 0.5));
    REQUIRE(remainder_estimate(0.5, 1, 1, 0.5) < remainder_estimate(1.0, 1, 1, 0.5));
    // one more pair moves the exponent by 2 pi ((2m+1) pi + delta)/t
    double r = remainder_estimate(1.0, 2, 3, pi / 2) / remainder_estimate(1.0, 2, 2, pi / 2);
    REQUIRE_THAT(std::log(r), WithinRel(3 * std::log(7.0 / 5.0) - 2 * pi * (5 * pi + pi / 2), 1e-12));
    REQUIRE_THROWS_AS(remainder_estimate(1.0, 1, 0, 0.5), DomainError);
    REQUIRE_THROWS_AS(remainder_estimate(1.0, 1, 1, 0.0), DomainError);
}

TEST_CASE("omitted pairs stay under the reported bound") {
    for (auto p : {SpherePoint(0.5, 1.0), SpherePoint(1.0, 2.5), SpherePoint(0.2, 0.1)})
        for (int n : {1, 2}) {
            EvalSpec s;
            s.k_max = 1;
            const double t = 1.0;
            auto kv = eval_PC_series(p, t, n, s);
            double tail = eval_PC_tail(p, t, n, 1);
            REQUIRE(std::abs(tail) <= kv.remainder_bound);
            double full = eval_PC_series(p, t, n).value;
            REQUIRE(std::abs(kv.value + tail - full) < 1e-9 * full);
        }
}

TEST_CASE("paired integrand") {
    SpherePoint p(0.0, 0.5);
    cd v = paired_integrand(p, 0.0, 1, 1, 0.4, Pairing::k_minus_k);
    REQUIRE(std::isfinite(v.real()));
    REQUIRE(std::isfinite(v.imag()));
    cd r = paired_integrand(SpherePoint(0.6, 0.0), 0.7, 0, 2, 0.4, Pairing::k_minus_k);
    REQUIRE(std::abs(r.imag()) < 1e-12 * std::abs(r));
    REQUIRE_THROWS_AS(paired_integrand(p, 0.0, 0, 1, 0.4, Pairing::automatic), DomainError);
    REQUIRE_THROWS_AS(paired_integrand(p, 0.0, -1, 1, 0.4, Pairing::k_minus_k), DomainError);
}

TEST_CASE("P_C input errors") {
    REQUIRE_THROWS_AS(eval_PC_series(SpherePoint(0.5, 0.5), 0.5, 4), UnsupportedRegime);
    REQUIRE_THROWS_AS(eval_PC_series(SpherePoint(0.5, 0.5), -1.0, 1), DomainError);
    REQUIRE_THROWS_AS(eval_PC_series(SpherePoint(0.5, 0.5), 5.0, 3), UnsupportedRegime);
    REQUIRE_NOTHROW(eval_PC_series(SpherePoint(0.5, 0.5), 4.0, 3));
    EvalSpec s;
    s.quad_tol = 0;
    REQUIRE_THROWS_AS(eval_PC_series(SpherePoint(0.5, 0.5), 0.5, 1, s), DomainError);
}

TEST_CASE("evaluation is deterministic across threads") {
    std::vector<SpherePoint> pts;
    for (int i = 0; i < 12; ++i) pts.emplace_back(0.1 * i, 0.25 * i - 1.0);
    auto run = [&](unsigned threads) {
        return parallel_map<double>(pts.size(), [&](std::size_t i) { return eval_PC_series(pts[i], 0.3, 2).value; }, threads);
    };
    auto a = run(1), b = run(4);
    for (std::size_t i = 0; i < pts.size(); ++i) REQUIRE(a[i] == b[i]);
}
