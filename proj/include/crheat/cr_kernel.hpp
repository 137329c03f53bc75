#pragma once
// Heat kernel of the CR subLaplacian on S^{2n+1}.
//
// The series of u-integrals is evaluated with the integration line moved from
// Im w = phi1 to the height of the first imaginary critical point, w = x + i psi.
// On that line the integrand has no large oscillating cancellation, and by
// conjugate symmetry P_C = prefactor * 2 Re int_0^X f(x) dx.
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "complex_action.hpp"
#include "elliptic_kernel.hpp"
#include "errors.hpp"
#include "pairing.hpp"
#include "quadrature.hpp"
#include "sphere_geom.hpp"

namespace crheat {

struct EvalSpec {
    double u_cutoff = 0.0;   // 0 selects the cutoff from the decay envelope
    double quad_tol = 1e-10;
    int k_max = 0;           // 0 selects it from tail_tol
    double tail_tol = 1e-14;
    Pairing pairing = Pairing::automatic;
    bool check_reality = false; // also integrate the x < 0 half independently
};

struct KernelValue {
    double value = 0.0;
    double remainder_bound = 0.0;
    double imag_part = 0.0;
    double mass = 0.0;        // prefactor times the L1 norm of the integrand
    double quad_error = 0.0;  // quadrature error estimate, same units as value
    Pairing pairing = Pairing::automatic;
    double contour_height = 0.0;
    double u_cutoff = 0.0;
    int k_max = 0;
};

struct ContourPlan {
    Pairing mode;
    double v; // height of the integration line, Im w
};

inline ContourPlan plan_contour(const SpherePoint& p, Pairing requested) {
    const double th = p.theta1, ph = std::abs(p.phi1);
    double psi;
    if (ph == 0.0) psi = 0.0;
    else if (th == 0.0) psi = pi;
    else if (th >= pi / 2) psi = ph; // cos(theta1) = 0 reduces the critical equation to psi = phi1
    else psi = std::abs(first_critical_point(SpherePoint(th, ph)).psi);

    switch (requested) {
    case Pairing::automatic:
        return {psi <= pi / 2 ? Pairing::k_minus_k : Pairing::k_minus_k_minus_1, psi};
    case Pairing::k_minus_k:
        if (th == 0.0 && ph == pi)
            throw PairingRequired("(k,-k) grouping is singular at theta1 = 0, phi1 = pi");
        return {Pairing::k_minus_k, std::min(psi, pi / 2)};
    case Pairing::k_minus_k_minus_1:
        if (th == 0.0 && ph == 0.0)
            throw PairingRequired("(k,-k-1) grouping is singular at the base point");
        return {Pairing::k_minus_k_minus_1, std::max(psi, pi / 2)};
    }
    throw DomainError("bad pairing");
}

namespace detail {

struct LineIntegrand {
    double cos_theta, phi, v, t;
    int n;
    Pairing mode;
    int j_lo, j_hi;

    // exp-scaled integrand at x: returns (log magnitude scale, value) folded together
    cd operator()(double x) const {
        cd w(x, v);
        cd z = kappa_of_w(cos_theta, w) - pairing_center(mode);
        cd u = w - I * phi;
        Scaled s = pair_sum(mode, n, z, t, j_lo, j_hi);
        return s.value * std::exp((z * z - u * u) / (2 * t) + s.log_scale);
    }
    double log_abs(double x) const {
        cd w(x, v);
        cd z = kappa_of_w(cos_theta, w) - pairing_center(mode);
        cd u = w - I * phi;
        Scaled s = pair_sum(mode, n, z, t, j_lo, j_hi);
        return std::log(std::abs(s.value)) + ((z * z - u * u) / (2 * t)).real() + s.log_scale;
    }
};

// March outwards until the integrand is e^{-40} below the largest value seen.
inline double envelope_cutoff(const LineIntegrand& f) {
    double best = -INFINITY, x = 0.0;
    const double step = 0.25;
    for (int i = 0; i < 2000; ++i, x += step) {
        double l = f.log_abs(x);
        if (std::isfinite(l)) best = std::max(best, l);
        if (x >= 1.0 && std::isfinite(best) && (l < best - 40.0 || !std::isfinite(l))) return x;
    }
    throw NonConvergence("integrand does not decay along the integration line");
}

// Run an adaptive integral at tol; if noise keeps the estimate above tol,
// loosen tenfold up to max_tol. The caller sees the achieved error.
template <class F>
auto adaptive_relaxed(F&& f, double X, double tol, double max_tol, const char* what) {
    for (;;) {
        try {
            return quad::adaptive(f, 0.0, X, tol, 20, 0.0, what);
        } catch (const NonConvergence&) {
            if (tol * 10 > max_tol) throw;
            tol *= 10;
        }
    }
}

inline double pc_prefactor_log(int n, double t) {
    return 0.5 * n * n * t - (n + 1) * std::log(2 * pi * t);
}

} // namespace detail

// Relative size of the omitted pairs after k_max retained ones, measured
// against the L1 mass of the retained integrand. Along the shifted line the
// first omitted pair is down by e^{-2m pi (m pi + delta)/t}, delta being the
// distance of Im kappa from the singular value of the grouping.
// The constant is twice the worst ratio seen in a calibration sweep at t in {0.5, 1}.
inline constexpr double remainder_constant = 4.72;

inline double remainder_estimate(double t, int n, int k_max, double phi_margin) {
    require_time(t);
    require_dimension(n);
    if (k_max < 1) throw DomainError("k_max must be >= 1");
    if (!(phi_margin > 0)) throw DomainError("phi_margin must be positive");
    const double m = k_max;
    return remainder_constant * std::pow(2 * m + 1, 2 * n - 1) * pi * std::exp(-2 * m * pi * (m * pi + phi_margin) / t);
}

// Margin delta for the line Im w = v: Im kappa runs between v and acos(cos theta1 cos v).
inline double line_margin(const SpherePoint& p, const ContourPlan& plan) {
    const double eta = std::acos(std::clamp(std::cos(p.theta1) * std::cos(plan.v), -1.0, 1.0));
    const double d = plan.mode == Pairing::k_minus_k ? pi - std::max(eta, plan.v) : std::min(eta, plan.v);
    return std::max(d, 1e-3);
}

// Integral of the grouped pairs j_lo..j_hi along the planned line; the full
// kernel when the range covers every retained pair.
inline KernelValue eval_PC_pairs(const SpherePoint& p, double t, int n, const EvalSpec& spec, int j_lo,
                                 int j_hi, int kmax_report) {
    const ContourPlan plan = plan_contour(p, spec.pairing);
    detail::LineIntegrand f{std::cos(p.theta1), std::abs(p.phi1), plan.v, t, n, plan.mode, j_lo, j_hi};
    const double X = spec.u_cutoff > 0 ? spec.u_cutoff : detail::envelope_cutoff(f);
    const double pre = std::exp(detail::pc_prefactor_log(n, t));
    KernelValue kv;
    if (spec.check_reality) {
        // integral over [-X, X] without using the conjugate symmetry; the
        // imaginary part should vanish
        auto both = [&](double x) { return f(x) + f(-x); };
        auto r = detail::adaptive_relaxed(both, X, spec.quad_tol, 1e-8, "P_C line integral");
        kv.value = pre * r.value.real();
        kv.quad_error = pre * r.error;
        kv.imag_part = pre * r.value.imag();
        kv.mass = pre * r.l1;
    } else {
        auto re = [&](double x) { return f(x).real(); };
        auto r = detail::adaptive_relaxed(re, X, spec.quad_tol, 1e-8, "P_C line integral");
        kv.value = 2.0 * pre * r.value;
        kv.quad_error = 2.0 * pre * r.error;
        kv.mass = 2.0 * pre * r.l1;
    }
    kv.pairing = plan.mode;
    kv.contour_height = plan.v;
    kv.u_cutoff = X;
    kv.k_max = kmax_report;
    kv.remainder_bound = kv.mass * remainder_estimate(t, n, kmax_report, line_margin(p, plan));
    return kv;
}

inline int resolve_kmax(double t, const EvalSpec& spec) {
    return spec.k_max > 0 ? spec.k_max : default_kmax(t, spec.tail_tol);
}

inline constexpr double max_prefactor_exponent = 20.0;

// P_C(theta1, phi1, t) on S^{2n+1}.
inline KernelValue eval_PC_series(const SpherePoint& p, double t, int n, const EvalSpec& spec = {}) {
    require_dimension(n);
    require_time(t);
    if (n > 3) throw UnsupportedRegime("P_C evaluation supports n in {1, 2, 3}");
    // beyond this the prefactor e^{n^2 t/2} cancels against the pair sums and
    // the line integrand turns into rounding noise
    if (0.5 * n * n * t > max_prefactor_exponent)
        throw UnsupportedRegime("P_C series loses its digits for n^2 t/2 > " + std::to_string(int(max_prefactor_exponent)));
    if (!(spec.quad_tol > 0)) throw DomainError("quad_tol must be positive");
    const int kmax = resolve_kmax(t, spec);
    const Pairing mode = plan_contour(p, spec.pairing).mode;
    auto [lo, hi] = pair_range(mode, kmax);
    return eval_PC_pairs(p, t, n, spec, lo, hi, kmax);
}

// Contribution of the omitted pairs beyond kmax, integrated directly. The
// omitted pairs oscillate with frequency ~q/t, so a dense fixed rule is used.
inline double eval_PC_tail(const SpherePoint& p, double t, int n, int kmax, const EvalSpec& spec = {}) {
    const ContourPlan plan = plan_contour(p, spec.pairing);
    const int first = pair_range(plan.mode, kmax).second + 1;
    detail::LineIntegrand f{std::cos(p.theta1), std::abs(p.phi1), plan.v, t, n, plan.mode, first, first + 5};
    const double X = detail::envelope_cutoff(f);
    const int panels = std::max(64, int(X * (first + 6) * 2 * pi / t));
    auto re = [&](double x) { return f(x).real(); };
    return 2.0 * std::exp(detail::pc_prefactor_log(n, t)) * quad::composite_gauss<20>(re, 0.0, X, panels);
}

// One grouped pair on the original line w = u + i phi1, including the Gaussian
// factor: e^{-(u^2 - z^2)/2t} times the pair. kk accepts k >= 0 (k = 0 is the
// unpaired term), kk1 accepts k >= 0 and groups k with -k-1.
inline cd paired_integrand(const SpherePoint& p, double u, int k, int n, double t, Pairing mode) {
    require_dimension(n);
    require_time(t);
    if (mode == Pairing::automatic) throw DomainError("paired_integrand needs kk or kk1");
    if (k < 0) throw DomainError("pair index must be >= 0");
    cd w(u, p.phi1);
    cd kap = kappa(p, u).value;
    if (p.phi1 < 0) kap = std::conj(kappa(SpherePoint(p.theta1, -p.phi1), u).value);
    cd z = kap - pairing_center(mode);
    Scaled s = pair_sum(mode, n, z, t, k, k);
    return s.value * std::exp((z * z - cd(u * u)) / (2 * t) + s.log_scale);
}

// Contour double-integral representation, an independent check of the series.
struct ContourValue {
    double value = 0.0;
    double imag_part = 0.0;
};

namespace detail {
// (1/2 pi) int e^{(alpha + i nu)/2t} / (cosh sqrt(alpha + u^2 + i nu) - W)^n d nu, with the
// vertical line parametrised by the hyperbola sqrt(lambda') = sigma + i chi.
inline cd contour_inner(double u, cd W, double alpha, double t, int n, double tol) {
    const double c = alpha + u * u;
    auto J = [&](double chi) -> cd {
        double sigma = std::sqrt(c + chi * chi);
        double nu = 2 * sigma * chi;
        cd root(sigma, chi);
        cd den = std::cosh(root) - W;
        cd val = std::exp(cd(alpha, nu) / (2 * t)) / std::pow(den, n);
        return val * (2 * (sigma + chi * chi / sigma)) / (2 * pi);
    };
    // |J| ~ 4 sigma e^{-n sigma}: cut where that is e^{-40} below the start
    double chi_max = 1.0;
    auto logJ = [&](double chi) { return std::log(std::abs(J(chi))); };
    const double l0 = std::max(logJ(0.0), std::max(logJ(1.0), logJ(-1.0)));
    while (std::max(logJ(chi_max), logJ(-chi_max)) > l0 - 42.0) chi_max += 1.0;
    auto r = quad::adaptive(J, -chi_max, chi_max, tol, 22, 0.0, "contour inner integral");
    return r.value;
}
} // namespace detail

inline ContourValue eval_PC_contour(const SpherePoint& p, double t, int n, double alpha, const EvalSpec& spec = {}) {
    require_dimension(n);
    require_time(t);
    if (!(alpha > 0)) throw DomainError("alpha must be positive: the line must stay right of all zeros");
    const double ct = std::cos(p.theta1), ph = p.phi1;
    const double tol = std::max(spec.quad_tol, 1e-13);
    auto outer = [&](double u) -> cd {
        cd Wp = ct * std::cosh(cd(u, ph));
        cd Wm = ct * std::cosh(cd(-u, ph));
        return detail::contour_inner(u, Wp, alpha, t, n, tol) + detail::contour_inner(-u, Wm, alpha, t, n, tol);
    };
    double U = 2.0;
    const double o0 = std::abs(outer(0.0));
    while (std::abs(outer(U)) > 1e-17 * o0 && U < 200) U += 2.0;
    auto re = [&](double u) { return outer(u); };
    auto r = quad::adaptive(re, 0.0, U, tol, 15, 0.0, "contour outer integral");
    const double pre = std::tgamma(double(n)) * std::exp(0.5 * n * n * t) /
                       (2 * std::pow(2 * pi, n - 1) * std::pow(2 * pi * t, 2));
    return {pre * r.value.real(), pre * r.value.imag()};
}

} // namespace crheat
