#include <catch_amalgamated.hpp>

#include <crheat/complex_action.hpp>
#include <crheat/geodesics.hpp>

#include <cmath>
#include <random>

using namespace crheat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

// shooting on the closed-form bicharacteristic in mpmath, tools/oracles.py
constexpr double dc_half_one = 1.8186136438992153;
constexpr double tau_half_one = 1.6299340783822441;

TEST_CASE("boundary value phi1(eta)") {
    REQUIRE_THAT(phi_of_eta(0.6, 0.6), WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(phi_of_eta(0.6, pi - 0.6), WithinAbs(pi, 1e-7));
    // at eta = pi/2 the value is (pi/2)(1 - cos theta1)
    const double th = 0.8;
    REQUIRE_THAT(phi_of_eta(th, pi / 2), WithinRel(pi / 2 * (1 - std::cos(th)), 1e-12));
    REQUIRE_THAT(phi_of_eta(0.6, -1.0), WithinRel(-phi_of_eta(0.6, 1.0), 1e-15));
    REQUIRE_THROWS_AS(phi_of_eta(0.0, 1.0), DomainError);
}

TEST_CASE("phi1(eta) is continuous across k pi + pi/2") {
    for (double th : {0.05, 0.3, 1.0})
        for (int k : {0, 2, 4}) {
            double e = k * pi + pi / 2;
            REQUIRE_THAT(phi_of_eta(th, e - 1e-9), WithinAbs(phi_of_eta(th, e + 1e-9), 1e-7));
        }
}

TEST_CASE("tan eta = eta fixed points") {
    REQUIRE_THAT(tan_fixed_point(1), WithinRel(4.4934094579090642, 1e-14));
    REQUIRE_THAT(tan_fixed_point(2), WithinRel(7.7252518369377072, 1e-14));
    for (int k = 1; k <= 6; ++k) {
        double e = tan_fixed_point(k);
        REQUIRE_THAT(std::tan(e), WithinRel(e, 1e-10));
    }
    REQUIRE_THROWS_AS(tan_fixed_point(0), DomainError);
}

TEST_CASE("branch enumeration") {
    SECTION("single branch away from the canonical curve") {
        auto bs = enumerate_branches(SpherePoint(1.2, 0.8));
        REQUIRE(bs.size() == 1);
        REQUIRE(bs[0].k == 0);
    }
    SECTION("many branches near theta1 = 0") {
        SpherePoint p(0.05, 0.3);
        auto bs = enumerate_branches(p);
        int c = branch_count(bs);
        REQUIRE(c > 1);
        REQUIRE(c % 2 == 1);
        REQUIRE(c == branch_count_by_scan(p));
        for (std::size_t i = 1; i < bs.size(); ++i) REQUIRE(bs[i].length > bs[i - 1].length);
        for (const auto& b : bs) REQUIRE_THAT(phi_of_eta(p.theta1, b.eta), WithinAbs(p.phi1, 1e-11));
    }
    SECTION("mirror in phi1") {
        auto a = enumerate_branches(SpherePoint(0.1, 1.0));
        auto b = enumerate_branches(SpherePoint(0.1, -1.0));
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            REQUIRE(a[i].eta == -b[i].eta);
            REQUIRE(a[i].length == b[i].length);
        }
    }
    SECTION("a tangency is one branch of multiplicity two") {
        const double th = 0.05;
        const double m = phi_of_eta(th, tan_fixed_point(2));
        auto bs = enumerate_branches(SpherePoint(th, m), 2);
        REQUIRE(bs.size() == 2);
        REQUIRE(bs[1].multiplicity == 2);
        REQUIRE(bs[1].j == 1);
        REQUIRE(branch_count(bs) == 3);
    }
    SECTION("counts agree with the grid scan") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> L(0.0, 1.0), P(0.01, pi);
        for (int i = 0; i < 15; ++i) {
            SpherePoint p(0.01 * std::pow(157.0, L(rng)), P(rng));
            auto bs = enumerate_branches(p);
            REQUIRE(branch_count(bs) == branch_count_by_scan(p));
            REQUIRE(branch_count(bs) % 2 == 1);
        }
    }
    REQUIRE_THROWS_AS(enumerate_branches(SpherePoint(0.0, 1.0)), DomainError);
    REQUIRE_THROWS_AS(enumerate_branches(SpherePoint(0.5, 1.0), -1), DomainError);
}

TEST_CASE("geodesic lengths") {
    REQUIRE_THAT(branch_length(0.5, 0.0), WithinRel(std::sin(0.5), 1e-15));
    REQUIRE_THAT(branch_length(0.5, pi / 2), WithinRel(std::sin(0.5) * pi / 2, 1e-15));
    REQUIRE_THROWS_AS(branch_length(0.5, pi), PoleError);
    auto l = theta0_lengths(1.0, 2);
    REQUIRE(l.size() == 3);
    REQUIRE_THAT(l[0], WithinRel(std::sqrt(2 * pi - 1), 1e-15));
    REQUIRE_THAT(l[2], WithinRel(std::sqrt(6 * pi - 1), 1e-15));
    REQUIRE_THROWS_AS(theta0_lengths(0.0, 2), DomainError);
}

TEST_CASE("Carnot-Caratheodory distance") {
    REQUIRE(carnot_distance(SpherePoint(0, 0)).value == 0.0);
    REQUIRE_THAT(carnot_distance(SpherePoint(0.7, 0)).value, WithinRel(0.7, 1e-15));
    for (double ph : {0.5, pi / 2, pi}) {
        double d = carnot_distance(SpherePoint(0, ph)).value;
        REQUIRE_THAT(d * d, WithinRel((2 * pi - ph) * ph, 1e-14));
    }
    auto d = carnot_distance(SpherePoint(0.5, 1.0));
    REQUIRE_THAT(d.value, WithinRel(dc_half_one, 1e-12));
    REQUIRE_THAT(d.branch->tau1_t, WithinRel(tau_half_one, 1e-10));
    REQUIRE_THAT(2 * first_critical_point(SpherePoint(0.5, 1.0)).g_value, WithinRel(d.value * d.value, 1e-10));
}

TEST_CASE("distance is continuous into the canonical curve") {
    for (double ph : {0.5, 1.0, 2.0}) {
        double d1 = carnot_distance(SpherePoint(0.05, ph)).value;
        double d2 = carnot_distance(SpherePoint(0.025, ph)).value;
        REQUIRE(std::abs(2 * d2 - d1 - std::sqrt((2 * pi - ph) * ph)) < 1e-3);
    }
}

TEST_CASE("bicharacteristic flow") {
    SECTION("tau1 = 0 is a great circle") {
        auto tr = integrate_bicharacteristic(1.0, 0.0, 1.0, 100);
        REQUIRE_THAT(tr.back().theta1, WithinRel(1.0, 1e-14));
        REQUIRE(tr.back().phi1 == 0.0);
    }
    SECTION("closed form, energy and CR condition") {
        auto tr = integrate_bicharacteristic(2.0, 1.0, 0.7, 10000);
        auto cf = bicharacteristic_closed_form(2.0, 1.0, 0.7);
        double st = std::sin(tr.back().theta1);
        REQUIRE_THAT(st * st, WithinAbs(cf.sin2_theta, 1e-9));
        REQUIRE_THAT(tr.back().phi1, WithinAbs(cf.phi1, 1e-9));
        for (const auto& x : tr) REQUIRE_THAT(x.H, WithinAbs(tr.front().H, 1e-10));
        REQUIRE(cr_defect(tr) < 1e-8);
    }
    SECTION("a perturbed phase breaks the CR condition") {
        auto tr = integrate_bicharacteristic(2.0, 1.0, 0.7, 1000);
        for (auto& x : tr) x.phi1 *= 1.01;
        REQUIRE(cr_defect(tr) > 1e-4);
    }
    REQUIRE_THROWS_AS(integrate_bicharacteristic(0.0, 1.0, 1.0, 10), DomainError);
    REQUIRE_THROWS_AS(integrate_bicharacteristic(1.0, 1.0, 1.0, 0), DomainError);
}

TEST_CASE("each branch reaches its target") {
    for (auto p : {SpherePoint(0.5, 1.0), SpherePoint(1.2, 0.8), SpherePoint(0.05, 0.3)})
        for (const auto& b : enumerate_branches(p)) {
            auto [E, tau] = branch_initial_data(b);
            auto cf = bicharacteristic_closed_form(E, tau, 1.0);
            REQUIRE_THAT(cf.sin2_theta, WithinAbs(std::sin(p.theta1) * std::sin(p.theta1), 1e-9));
            REQUIRE_THAT(cf.phi1, WithinAbs(p.phi1, 1e-9));
            if (b.k == 0) {
                auto tr = integrate_bicharacteristic(E, tau, 1.0, 4000);
                REQUIRE_THAT(tr.back().theta1, WithinAbs(p.theta1, 1e-6));
                REQUIRE_THAT(tr.back().phi1, WithinAbs(p.phi1, 1e-6));
            }
        }
}
