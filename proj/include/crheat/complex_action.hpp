#pragma once
// The branch-resolved kappa(u), the complex action and its critical points.
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "coefficients.hpp"
#include "errors.hpp"
#include "jet.hpp"
#include "sphere_geom.hpp"

namespace crheat {

struct KappaValue {
    double u_tilde = 0.0;
    double phi_tilde = 0.0;
    cd value = 0.0;
};

// Root of cosh(kappa) = cos(theta1) cosh(w) on the sheet where Im kappa follows
// the sign of Im w; on the real line Re kappa follows the sign of Re w.
inline cd kappa_of_w(double cos_theta, cd w) {
    cd W = cos_theta * std::cosh(w);
    cd k = std::acosh(W);
    if (w.imag() > 0 && k.imag() < 0) k = -k;
    else if (w.imag() < 0 && k.imag() > 0) k = -k;
    else if (w.imag() == 0 && k.imag() == 0 && w.real() < 0 && k.real() > 0) k = -k;
    return k;
}

inline KappaValue kappa(const SpherePoint& p, double u) {
    cd k = kappa_of_w(std::cos(p.theta1), cd(u, p.phi1));
    if (p.theta1 == 0.0) k = cd(u, p.phi1); // exact on the canonical curve
    return {k.real(), k.imag(), k};
}

// f(u, kappa + 2k pi i) = u^2 - (kappa + 2k pi i)^2
inline cd action_f(const SpherePoint& p, double u, int k) {
    cd kk = kappa(p, u).value + I * (2.0 * pi * k);
    return u * u - kk * kk;
}

// g_k(w) = (w - i phi1)^2/2 - (kappa(w) + 2k pi i)^2/2
inline cd g_shifted(const SpherePoint& p, cd w, int k) {
    cd kk = kappa_of_w(std::cos(p.theta1), w) + I * (2.0 * pi * k);
    cd a = w - I * p.phi1;
    return 0.5 * a * a - 0.5 * kk * kk;
}

namespace detail {
// Taylor coefficients of Q(W) = arccosh(W)^2 at W0 up to order 2. Q is analytic
// away from W <= -1, so g_0 can be differentiated without choosing a sheet.
inline std::array<cd, 3> Q_taylor(cd W0) {
    cd s = W0 - 1.0;
    if (std::abs(s) < 1e-3) {
        // arccosh(1+s)^2 = 2s - s^2/3 + 4s^3/45 - s^4/35 + 16 s^5/1575
        cd q = s * (2.0 + s * (-1.0 / 3 + s * (4.0 / 45 + s * (-1.0 / 35 + s * (16.0 / 1575)))));
        cd q1 = 2.0 + s * (-2.0 / 3 + s * (12.0 / 45 + s * (-4.0 / 35 + s * (80.0 / 1575))));
        cd q2 = -2.0 / 3 + s * (24.0 / 45 + s * (-12.0 / 35 + s * (320.0 / 1575)));
        return {q, q1, 0.5 * q2};
    }
    cd k = std::acosh(W0);
    cd V = V_profile(k);
    cd Q2 = 2.0 * (1.0 - W0 * V) / (W0 * W0 - 1.0);
    return {k * k, 2.0 * V, 0.5 * Q2};
}
} // namespace detail

// Jet of g_0 in w at w0 (order 2).
inline Jet<cd, 2> g0_jet(const SpherePoint& p, cd w0) {
    using J = Jet<cd, 2>;
    J w = J::variable(w0);
    J W = cosh(w) * cd(std::cos(p.theta1));
    J Q = compose(W, detail::Q_taylor(W.value()));
    J a = w - I * p.phi1;
    return a * a * cd(0.5) - Q * cd(0.5);
}

// Left side of the critical-point equation,
// F(psi) = psi - arccos(x) cos(theta1) sin(psi) / sqrt(1 - x^2) - phi1,  x = cos(theta1) cos(psi).
inline double critical_equation(const SpherePoint& p, double psi) {
    double ct = std::cos(p.theta1), st = std::sin(p.theta1);
    double x = ct * std::cos(psi);
    double s = std::sqrt(st * st + ct * ct * std::sin(psi) * std::sin(psi)); // sqrt(1-x^2)
    double eta = std::atan2(s, x);
    double ratio = s > 0 ? eta / s : 1.0;
    return psi - ratio * ct * std::sin(psi) - p.phi1;
}

// dF/dpsi = alpha^2 (1 - eta cot eta), alpha = sin(theta1)/sin(eta), cos eta = x.
inline double critical_equation_slope(const SpherePoint& p, double psi) {
    double ct = std::cos(p.theta1), st = std::sin(p.theta1);
    double x = ct * std::cos(psi);
    double s2 = st * st + ct * ct * std::sin(psi) * std::sin(psi);
    double s = std::sqrt(s2);
    double eta = std::atan2(s, x);
    return st * st / s2 * (1.0 - eta * x / s);
}

struct CriticalPoint {
    double psi = 0.0;
    double g_value = 0.0;
    double second_deriv = 0.0;
};

// Phi''(0) at a given psi: sin^2 theta/(1-x^2) (1 - x arccos(x)/sqrt(1-x^2))
inline double phase_second_derivative_at(const SpherePoint& p, double psi) {
    return critical_equation_slope(p, psi);
}

// First imaginary critical point i psi of g_0 with psi in [phi1, pi]; negative
// phi1 is handled by the mirror (phi1, psi) -> (-phi1, -psi).
inline CriticalPoint first_critical_point(const SpherePoint& p_in) {
    if (p_in.theta1 >= pi / 2) throw BracketFailure("critical point window degenerates at theta1 = pi/2");
    const double sgn = p_in.phi1 < 0 ? -1.0 : 1.0;
    const SpherePoint p(p_in.theta1, std::abs(p_in.phi1));
    double psi;
    if (p.phi1 == 0.0) {
        psi = 0.0;
    } else if (p.theta1 == 0.0 || critical_equation(p, pi) <= 0.0) {
        psi = pi;
    } else {
        double lo = p.phi1, hi = pi;
        while (hi - lo > 1e-13) {
            double mid = 0.5 * (lo + hi);
            (critical_equation(p, mid) < 0 ? lo : hi) = mid;
        }
        psi = 0.5 * (lo + hi);
    }
    CriticalPoint cp;
    cp.psi = sgn * psi;
    double ct = std::cos(p.theta1), st = std::sin(p.theta1);
    double x = ct * std::cos(psi);
    double s = std::sqrt(st * st + ct * ct * std::sin(psi) * std::sin(psi));
    double eta = std::atan2(s, x);
    cp.g_value = 0.5 * (eta * eta - (psi - p.phi1) * (psi - p.phi1));
    cp.second_deriv = p.theta1 > 0 ? phase_second_derivative_at(p, psi) : 0.0;
    return cp;
}

inline double phase_second_derivative(const SpherePoint& p) {
    if (!(p.theta1 > 0)) throw DomainError("Phi''(0) degenerates at theta1 = 0");
    return first_critical_point(p).second_deriv;
}

// d Re g / du along the line Im w = v.
inline std::vector<double> monotonicity_scan(const SpherePoint& p, double v, const std::vector<double>& u_grid) {
    if (!(v >= 0 && v < pi)) throw DomainError("v must lie in [0, pi)");
    std::vector<double> out;
    out.reserve(u_grid.size());
    for (double u : u_grid) out.push_back(g0_jet(p, cd(u, v))[1].real());
    return out;
}

} // namespace crheat
