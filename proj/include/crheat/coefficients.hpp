#pragma once
// Transport coefficients V = kappa/sinh(kappa), V_n(kappa,t) and the
// W_{n,l} of the recursive construction.
#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "errors.hpp"
#include "jet.hpp"
#include "quadrature.hpp"
#include "sphere_geom.hpp"

namespace crheat {

using cd = std::complex<double>;
inline constexpr cd I{0.0, 1.0};

inline void check_pole(cd kappa, double radius = 1e-12) {
    double m = std::round(kappa.imag() / pi);
    if (m != 0.0 && std::abs(kappa - I * (m * pi)) < radius)
        throw PoleError("sinh(kappa) vanishes at kappa = i*" + std::to_string(m) + "*pi");
}

// Mean of f over the circle |z - z0| = rho. For f analytic on a larger disc this
// recovers f(z0) and sidesteps removable 0/0 forms at the centre.
template <class F>
cd circle_mean(F&& f, cd z0, double rho, int points = 48) {
    cd s = 0.0;
    for (int k = 0; k < points; ++k) s += f(z0 + rho * std::polar(1.0, 2 * pi * (k + 0.5) / points));
    return s / double(points);
}

// Taylor coefficients c_k = f^(k)(z0)/k!, k = 0..K, from values on a circle.
template <std::size_t K, class F>
std::array<cd, K + 1> circle_taylor(F&& f, cd z0, double rho, int points = 48) {
    std::array<cd, K + 1> c{};
    for (int j = 0; j < points; ++j) {
        double a = 2 * pi * (j + 0.5) / points;
        cd v = f(z0 + rho * std::polar(1.0, a));
        for (std::size_t k = 0; k <= K; ++k) c[k] += v * std::polar(1.0, -double(k) * a);
    }
    for (std::size_t k = 0; k <= K; ++k) c[k] /= double(points) * std::pow(rho, double(k));
    return c;
}

// kappa / sinh(kappa)
inline cd V_profile(cd kappa) {
    check_pole(kappa);
    if (std::abs(kappa) < 1e-3) {
        cd k2 = kappa * kappa;
        return 1.0 - k2 / 6.0 + 7.0 * k2 * k2 / 360.0;
    }
    return kappa / std::sinh(kappa);
}

template <std::size_t N>
Jet<cd, N> V_jet(const Jet<cd, N>& z) {
    return Jet<cd, N>(cd(1.0)) / sinhc(z);
}

// One application of G -> (z G + t G') / sinh z. This is t d/d(cosh z) acting on
// exp(z^2/2t) G, written relative to exp(z^2/2t).
template <std::size_t N>
Jet<cd, N> twisted_derivative(const Jet<cd, N>& G, const Jet<cd, N>& z, double t) {
    return (z * G + differentiate(G) * cd(t)) / sinh(z);
}

namespace detail {
inline cd Vn_closed_direct(int n, cd kappa, double t) {
    using J = Jet<cd, 3>;
    J z = J::variable(kappa);
    J G = V_jet(z);
    for (int i = 1; i < n; ++i) G = twisted_derivative(G, z, t);
    return G.value();
}
} // namespace detail

// V_n(kappa, t): (t d/d cosh)^{n-1} applied to exp(kappa^2/2t) kappa/sinh kappa,
// times exp(-kappa^2/2t). Derivatives by jet arithmetic.
inline cd Vn_closed(int n, cd kappa, double t) {
    require_dimension(n);
    if (n > 4) throw UnsupportedRegime("Vn_closed supports n <= 4");
    if (!(t > 0)) throw DomainError("t must be positive");
    check_pole(kappa);
    if (n == 1) return V_profile(kappa);
    if (std::abs(kappa) < 0.1)
        return circle_mean([&](cd z) { return detail::Vn_closed_direct(n, z, t); }, kappa, 0.3, 32);
    return detail::Vn_closed_direct(n, kappa, t);
}

// Coefficients V_{n,l}(kappa), l = 0..degree, of V_n(kappa, t) as a polynomial in t,
// by interpolation at t = 2^{-j} and a Vandermonde solve.
inline std::vector<cd> Vn_coefficients(int n, cd kappa, int degree = -1) {
    if (degree < 0) degree = n - 1;
    const int m = degree + 1;
    Eigen::MatrixXcd A(m, m);
    Eigen::VectorXcd b(m);
    for (int j = 0; j < m; ++j) {
        double t = std::ldexp(1.0, -j);
        for (int l = 0; l < m; ++l) A(j, l) = std::pow(t, l);
        b(j) = Vn_closed(n, kappa, t);
    }
    Eigen::VectorXcd x = A.fullPivLu().solve(b);
    return std::vector<cd>(x.data(), x.data() + m);
}

namespace detail {

// (L - n^2/2) f with L = -(f''/2 + n coth(s) f'), the kappa form of L_S.
template <std::size_t N>
Jet<cd, N> shifted_L(const Jet<cd, N>& f, const Jet<cd, N>& s, int n) {
    Jet<cd, N> f1 = differentiate(f);
    Jet<cd, N> f2 = differentiate(f1);
    Jet<cd, N> coth = cosh(s) / sinh(s);
    return -(f2 * cd(0.5) + coth * f1 * cd(double(n))) - f * cd(0.5 * n * n);
}

template <std::size_t N>
Jet<cd, N> jet_pow(const Jet<cd, N>& a, int n) {
    Jet<cd, N> r(cd(1.0));
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

// h1(s) = V^{-n} (L - n^2/2) V^n, value only.
inline cd h1_value(int n, cd s) {
    using J = Jet<cd, 2>;
    J z = J::variable(s);
    J Vn = jet_pow(V_jet(z), n);
    J r = shifted_L(Vn, z, n) / Vn;
    return r.value();
}

// Taylor coefficients of h1 at s0 up to order 2.
inline std::array<cd, 3> h1_taylor(int n, cd s0) {
    if (std::abs(s0) < 0.1) return circle_taylor<2>([&](cd s) { return h1_value(n, s); }, s0, 0.25, 32);
    using J = Jet<cd, 4>;
    J z = J::variable(s0);
    J Vn = jet_pow(V_jet(z), n);
    J r = shifted_L(Vn, z, n) / Vn;
    return {r[0], r[1], r[2]};
}

inline void check_segment(cd kappa) {
    // distance from i*m*pi (m != 0) to the segment [0, kappa]
    for (int m = -8; m <= 8; ++m) {
        if (m == 0) continue;
        cd p = I * (m * pi);
        double len2 = std::norm(kappa);
        double s = len2 > 0 ? std::max(0.0, std::min(1.0, (std::conj(kappa) * p).real() / len2)) : 0.0;
        if (std::abs(p - s * kappa) < 1e-6)
            throw PoleError("integration path from 0 to kappa passes through a pole of 1/sinh");
    }
}

template <class F>
cd segment_integral(F&& f, int panels) {
    return quad::composite_gauss<20>([&](double tau) { return f(tau); }, 0.0, 1.0, panels);
}

} // namespace detail

// W_{n,l}(kappa) = kappa^{-l} int_0^kappa V^{-n} s^{l-1} (L - n^2/2) V_{n,l-1} ds along the
// straight segment, with V_{n,0} = V^n and V_{n,l} = V^n W_{n,l}. Supported l in {1,2};
// for l >= n the identity W_{n,l} = 0 is returned directly.
inline cd Wnl_iterative(int n, int ell, cd kappa, double tol = 1e-10) {
    require_dimension(n);
    if (ell < 1) throw DomainError("ell must be >= 1");
    if (ell > 2) {
        if (ell >= n) return 0.0;
        throw UnsupportedRegime("Wnl_iterative supports ell <= 2");
    }
    detail::check_segment(kappa);
    check_pole(kappa, 1e-6);

    auto compute = [&](int panels) -> cd {
        // W_{n,1}(s) = int_0^1 h1(s tau) dtau
        auto W1_taylor = [&](cd s) {
            std::array<cd, 3> c{};
            quad::for_each_node(0.0, 1.0, panels, [&](double tau, double w) {
                auto h = detail::h1_taylor(n, s * tau);
                c[0] += w * h[0];
                c[1] += w * tau * h[1];
                c[2] += w * tau * tau * h[2];
            });
            return c;
        };
        if (ell == 1)
            return detail::segment_integral([&](double tau) { return detail::h1_value(n, kappa * tau); }, panels);

        // ell == 2: W_{n,2}(kappa) = int_0^1 tau h2(kappa tau) dtau
        auto h2 = [&](cd s) -> cd {
            using J = Jet<cd, 2>;
            J z = J::variable(s);
            auto c = W1_taylor(s);
            J W1;
            W1.c = {c[0], c[1], c[2]};
            J Vn = detail::jet_pow(V_jet(z), n);
            J r = detail::shifted_L(Vn * W1, z, n) / Vn;
            return r.value();
        };
        return detail::segment_integral([&](double tau) { return tau * h2(kappa * tau); }, panels);
    };
    cd coarse = compute(ell == 1 ? 8 : 4);
    cd fine = compute(ell == 1 ? 16 : 8);
    if (std::abs(fine - coarse) > tol * std::max(std::abs(fine), 1.0))
        throw NonConvergence("Wnl_iterative: panel refinement changed the value by " +
                             std::to_string(std::abs(fine - coarse) / std::abs(fine)));
    return fine;
}

// Real-angle profile v_{2,1}(gamma) in terms of x = cos(gamma).
inline double v21_closed(double gamma) {
    double x = std::cos(gamma), s2 = 1 - x * x;
    return -1.0 / s2 + x * std::acos(x) / std::pow(s2, 1.5);
}

} // namespace crheat
