#include <catch_amalgamated.hpp>

#include <crheat/identities.hpp>

#include <cmath>

using namespace crheat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("moment integral, k = 0 by hand") {
    // int_0^1 du / sqrt(A^2 - u) = 2 (A - sqrt(A^2 - 1))
    for (double A : {1.1, 2.0, 5.0})
        REQUIRE_THAT(moment_derivative_closed(0, A), WithinRel(2 * (A - std::sqrt(A * A - 1)), 1e-15));
}

TEST_CASE("differentiated moments: quadrature against closed form") {
    for (int k = 0; k <= 6; ++k)
        for (double A : {1.2, 1.5, 3.0})
            REQUIRE_THAT(moment_derivative_quadrature(k, A), WithinRel(moment_derivative_closed(k, A), 1e-12));
    REQUIRE_THROWS_AS(moment_derivative_quadrature(7, 2.0), DomainError);
    REQUIRE_THROWS_AS(moment_derivative_quadrature(1, 1.0), DomainError);
    REQUIRE_THROWS_AS(moment_derivative_closed(1, 0.5), DomainError);
}

TEST_CASE("vertical line integral") {
    for (double alpha : {0.5, 1.0, 2.0})
        for (double t : {0.5, 1.0}) {
            auto q = vertical_line_integral(alpha, t, 1.0);
            auto c = vertical_line_closed(alpha, t);
            REQUIRE(std::abs(q - c) < 1e-11 * std::abs(c));
        }
}

TEST_CASE("vertical line integral does not depend on the abscissa") {
    auto a = vertical_line_integral(1.0, 1.0, 0.5);
    auto b = vertical_line_integral(1.0, 1.0, 2.0);
    REQUIRE(std::abs(a - b) < 1e-11 * std::abs(a));
    REQUIRE_THROWS_AS(vertical_line_integral(1.0, 1.0, 0.0), DomainError);
}
