#include <catch_amalgamated.hpp>

#include <crheat/asymptotics.hpp>
#include <crheat/cr_kernel.hpp>

#include <cmath>

using namespace crheat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("canonical-curve leading term") {
    // n = 1, phi1 = pi/2: d^2 = 3 pi^2/4, prefactor 1/(2 t^2)
    const double t = 0.1;
    auto a = leading_PC(SpherePoint(0.0, pi / 2), t, 1);
    REQUIRE(a.regime == AsymptoticRegime::canonical_curve);
    REQUIRE(a.warning.empty());
    REQUIRE_THAT(a.d_c_sq, WithinRel(0.75 * pi * pi, 1e-15));
    REQUIRE_THAT(a.leading, WithinRel(1 / (2 * t * t) * std::exp(-0.75 * pi * pi / (2 * t)), 1e-14));
    // n = 2 picks up d^2/2pi
    auto b = leading_PC(SpherePoint(0.0, 1.0), t, 2);
    double d2 = (2 * pi - 1.0);
    REQUIRE_THAT(b.prefactor, WithinRel(d2 / (2 * pi) / (4 * std::pow(t, 4)), 1e-14));
}

TEST_CASE("generic leading term") {
    const SpherePoint p(0.5, 1.0);
    const double t = 0.05;
    auto a = leading_PC(p, t, 1);
    REQUIRE(a.regime == AsymptoticRegime::generic);
    const double d = carnot_distance(p).value;
    REQUIRE_THAT(a.d_c_sq, WithinRel(d * d, 1e-15));
    REQUIRE_THAT(-2 * t * std::log(a.leading / a.prefactor), WithinRel(d * d, 1e-12));
    // phi1 = 0: eta = theta1 and the Riemannian Gaussian comes back
    auto r = leading_PC(SpherePoint(0.8, 0.0), t, 1);
    double expect = std::pow(2 * pi * t, -1.5) * (0.8 / std::sin(0.8)) / std::sqrt(1 - 0.8 / std::tan(0.8)) *
                    std::exp(-0.32 / t);
    REQUIRE_THAT(r.leading, WithinRel(expect, 1e-12));
}

TEST_CASE("regimes without a formula are refused") {
    REQUIRE_THROWS_AS(leading_PC(SpherePoint(0.0, 0.0), 0.1, 1), UnsupportedRegime);
    REQUIRE_THROWS_AS(leading_PC(SpherePoint(0.0, pi), 0.1, 1), UnsupportedRegime);
    REQUIRE_THROWS_AS(leading_PC(SpherePoint(0.5, pi), 0.1, 1), UnsupportedRegime);
    REQUIRE_THROWS_AS(leading_PC(SpherePoint(pi / 2, 1.0), 0.1, 1), UnsupportedRegime);
    REQUIRE_THROWS_AS(leading_PC(SpherePoint(0.5, 1.0), 0.0, 1), DomainError);
}

TEST_CASE("points just off the canonical curve carry a warning") {
    auto a = leading_PC(SpherePoint(5e-4, 1.0), 0.1, 1);
    REQUIRE(a.regime == AsymptoticRegime::canonical_curve);
    REQUIRE_FALSE(a.warning.empty());
    auto b = leading_PC(SpherePoint(2e-3, 1.0), 0.1, 1);
    REQUIRE(b.regime == AsymptoticRegime::generic);
}

TEST_CASE("the kernel approaches its leading term linearly in t") {
    for (auto [th, ph, n] : {std::tuple{0.8, 0.4, 1}, std::tuple{0.0, pi / 2, 1}, std::tuple{0.5, 1.0, 2}}) {
        SpherePoint p(th, ph);
        double dev[3];
        const double ts[3] = {0.1, 0.05, 0.025};
        for (int i = 0; i < 3; ++i)
            dev[i] = std::abs(eval_PC_series(p, ts[i], n).value / leading_PC(p, ts[i], n).leading - 1);
        REQUIRE(dev[2] < dev[1]);
        REQUIRE(dev[1] < dev[0]);
        REQUIRE(dev[1] / dev[2] > 1.5);
        REQUIRE(dev[1] / dev[2] < 3.0);
    }
}
