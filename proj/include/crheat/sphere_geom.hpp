#pragma once
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"

namespace crheat {

inline constexpr double pi = std::numbers::pi;

// Point of S^{2n+1} in reduced coordinates relative to the base point (1,0,...,0).
struct SpherePoint {
    double theta1 = 0.0;
    double phi1 = 0.0;

    SpherePoint() = default;
    SpherePoint(double th, double ph) : theta1(th), phi1(ph) {
        if (!(th >= 0.0 && th <= pi / 2 + 1e-15))
            throw DomainError("theta1 must lie in [0, pi/2], got " + std::to_string(th));
        if (!(ph > -pi - 1e-15 && ph <= pi + 1e-15))
            throw DomainError("phi1 must lie in (-pi, pi], got " + std::to_string(ph));
        theta1 = std::min(th, pi / 2);
        phi1 = std::max(-pi, std::min(ph, pi));
        if (phi1 == -pi) phi1 = pi;
    }
};

inline void require_dimension(int n) {
    if (n < 1) throw DomainError("dimension index n must be >= 1");
}

inline double riemannian_angle(const SpherePoint& p) {
    double c = std::cos(p.theta1) * std::cos(p.phi1);
    return std::acos(std::max(-1.0, std::min(1.0, c)));
}

// |S^{2n+1}| = 2 pi^{n+1} / n!
inline double sphere_area(int n) {
    return 2.0 * std::pow(pi, n + 1) / std::tgamma(n + 1.0);
}

// Integral over S^{2n+1} of a function of x1 = cos(gamma). Substituting
// x1 = cos(gamma) turns the weight (1-x^2)^{n-1/2} dx into sin^{2n}(gamma) dgamma,
// which is smooth at both ends.
inline double integrate_zonal(const std::function<double(double)>& f, int n, double tol = 1e-12) {
    require_dimension(n);
    if (!(tol > 0)) throw DomainError("tol must be positive");
    const double c = 2.0 * std::pow(pi, n + 0.5) / std::tgamma(n + 0.5);
    auto g = [&](double gam) { return f(std::cos(gam)) * std::pow(std::sin(gam), 2 * n); };
    auto r = quad::adaptive(g, 0.0, pi, tol, 18, 0.0, "integrate_zonal");
    return c * r.value;
}

// Integral over S^{2n+1} of a function of (theta1, phi1) with the reduced measure
// (pi^n/Gamma(n)) sin^{2(n-1)}theta sin(2 theta) dtheta dphi. Tensor Gauss rule.
template <class F>
double integrate_reduced(F&& f, int n, int theta_panels = 4, int phi_panels = 6) {
    require_dimension(n);
    const double c = std::pow(pi, n) / std::tgamma(double(n));
    auto inner = [&](double th) {
        double w = std::pow(std::sin(th), 2 * (n - 1)) * std::sin(2 * th);
        if (w == 0.0) return 0.0;
        auto fp = [&](double ph) { return f(th, ph); };
        return w * quad::composite_gauss<20>(fp, -pi, pi, phi_panels);
    };
    return c * quad::composite_gauss<20>(inner, 0.0, pi / 2, theta_panels);
}

namespace detail {
// 5-point central stencils (fourth order), Richardson-combined at h and h/2.
template <class F>
double d1(F&& f, double x, double h) {
    auto D = [&](double s) { return (-f(x + 2 * s) + 8 * f(x + s) - 8 * f(x - s) + f(x - 2 * s)) / (12 * s); };
    return (16 * D(h / 2) - D(h)) / 15;
}
template <class F>
double d2(F&& f, double x, double h) {
    auto D = [&](double s) {
        return (-f(x + 2 * s) + 16 * f(x + s) - 30 * f(x) + 16 * f(x - s) - f(x - 2 * s)) / (12 * s * s);
    };
    return (16 * D(h / 2) - D(h)) / 15;
}
} // namespace detail

// (L_S f)(gamma) = f''/2 + n cot(gamma) f'
inline double apply_L_S(const std::function<double(double)>& f, double gamma, int n, double h = 1e-3) {
    require_dimension(n);
    if (!(h > 0)) throw DomainError("step must be positive");
    if (gamma - 2 * h <= 0.0 || gamma + 2 * h >= pi)
        throw DomainError("L_S stencil leaves (0, pi) at gamma = " + std::to_string(gamma));
    return 0.5 * detail::d2(f, gamma, h) + n / std::tan(gamma) * detail::d1(f, gamma, h);
}

// (L_C f) = f_tt/2 + ((n-1) cot t + cot 2t) f_t + tan^2(t) f_pp / 2
inline double apply_L_C(const std::function<double(double, double)>& f, const SpherePoint& p, int n,
                        double h = 1e-3) {
    require_dimension(n);
    if (!(h > 0)) throw DomainError("step must be positive");
    const double th = p.theta1, ph = p.phi1;
    if (th - 2 * h <= 0.0 || th + 2 * h >= pi / 2)
        throw DomainError("L_C stencil leaves the chart at theta1 = " + std::to_string(th));
    auto ft = [&](double x) { return f(x, ph); };
    auto fp = [&](double y) { return f(th, y); };
    double t2 = std::tan(th) * std::tan(th);
    double coef = (n - 1) / std::tan(th) + 1.0 / std::tan(2 * th);
    return 0.5 * detail::d2(ft, th, h) + coef * detail::d1(ft, th, h) + 0.5 * t2 * detail::d2(fp, ph, h);
}

} // namespace crheat
