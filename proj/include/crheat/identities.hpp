#pragma once
// Two closed-form integrals used in the normalization argument, each evaluated
// both by quadrature and in closed form.
#include <cmath>
#include <complex>

#include "jet.hpp"
#include "quadrature.hpp"
#include "sphere_geom.hpp"

namespace crheat {

// q_k(A) = int_0^1 (1-u)^k / sqrt(A^2 - u) du. Returns d^k q_k / dA^k, the
// derivative carried by jet arithmetic in A under the integral sign.
inline double moment_derivative_quadrature(int k, double A) {
    if (k < 0 || k > 6) throw DomainError("moment_derivative supports 0 <= k <= 6");
    if (!(A > 1)) throw DomainError("moment_derivative needs A > 1");
    using J = Jet<double, 6>;
    const J a = J::variable(A);
    J sum(0.0);
    quad::for_each_node<20>(0.0, 1.0, 16, [&](double u, double w) {
        sum += (std::pow(1 - u, k) * w) * (J(1.0) / sqrt(a * a - u));
    });
    return sum.derivative(k);
}

// (-1)^k 2^{k+1} k! / (k+1) (A - sqrt(A^2-1))^{k+1}
inline double moment_derivative_closed(int k, double A) {
    if (!(A > 1)) throw DomainError("moment_derivative needs A > 1");
    const double sign = k % 2 ? -1.0 : 1.0;
    return sign * std::pow(2.0, k + 1) * std::tgamma(k + 1.0) / (k + 1) *
           std::pow(A - std::sqrt(A * A - 1), k + 1);
}

// int over Re lambda = omega of e^{lambda/t - alpha sqrt(2 lambda)} d lambda,
// computed on the vertical line itself. The modulus decays like
// e^{-alpha sqrt(|nu|)}, so the line is cut where it has dropped by e^{-40}.
inline std::complex<double> vertical_line_integral(double alpha, double t, double omega) {
    if (!(alpha > 0 && t > 0 && omega > 0)) throw DomainError("vertical_line_integral needs alpha, t, omega > 0");
    using cd = std::complex<double>;
    auto f = [&](double nu) {
        cd lam(omega, nu);
        return std::exp(lam / t - alpha * std::sqrt(2.0 * lam));
    };
    const double decay0 = alpha * std::sqrt(2 * omega);
    double N = 1.0;
    while (alpha * std::sqrt(2.0) * std::sqrt(0.5 * (std::hypot(omega, N) + omega)) < decay0 + 40) N *= 1.25;
    // panels shorter than a quarter of the oscillation period 2 pi t
    const int panels = int(std::ceil(2 * N / (0.5 * pi * t)));
    return cd(0, 1) * quad::composite_gauss<20>(f, -N, N, panels);
}

// i sqrt(2 pi) alpha t^{3/2} e^{-alpha^2 t/2}
inline std::complex<double> vertical_line_closed(double alpha, double t) {
    return {0.0, std::sqrt(2 * pi) * alpha * std::pow(t, 1.5) * std::exp(-alpha * alpha * t / 2)};
}

} // namespace crheat
