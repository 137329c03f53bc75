#pragma once
// Heat kernel of the Laplace-Beltrami operator on S^{2n+1} as a function of the
// Riemannian angle gamma.
#include <cmath>
#include <string>

#include "errors.hpp"
#include "pairing.hpp"
#include "sphere_geom.hpp"

namespace crheat {

struct SeriesSpec {
    int k_max = 0;          // 0 selects the default from tail_tol
    double tail_tol = 1e-14;
};

inline void require_time(double t) {
    if (!(t > 0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
}

// Gaussian tail bound of the omitted terms |k| > kmax.
inline double ps_tail_bound(double t, int kmax) {
    double a = (2 * kmax + 1) * pi;
    return 2.2 * std::exp(-a * a / (2 * t));
}

// Eigenfunction expansion sum_m e^{-m(m+2n)t/2} ((m+n)/n) C_m^n(cos gamma) / |S^{2n+1}|,
// independent of the theta-type series above. Converges fast for t >~ 0.2.
inline double eval_PS_spectral(double gamma, double t, int n, int m_max = 400) {
    require_dimension(n);
    require_time(t);
    const double x = std::cos(gamma);
    // Gegenbauer recurrence m C_m = 2x(m+n-1) C_{m-1} - (m+2n-2) C_{m-2}
    double c_prev = 1.0, c_cur = 2.0 * n * x;
    double sum = 1.0 * c_prev * std::exp(0.0);
    sum += std::exp(-(1.0 + 2 * n) * t / 2) * (1.0 + n) / n * c_cur;
    for (int m = 2; m <= m_max; ++m) {
        double c_next = (2 * x * (m + n - 1) * c_cur - (m + 2 * n - 2) * c_prev) / m;
        double w = std::exp(-double(m) * (m + 2 * n) * t / 2);
        sum += w * (double(m) + n) / n * c_next;
        c_prev = c_cur;
        c_cur = c_next;
        if (w < 1e-300) break;
    }
    return sum / sphere_area(n);
}

inline constexpr double spectral_switch_time = 2.0;

// P_S = e^{n^2 t/2} (2 pi t)^{-(n+1/2)} sum_k e^{-(gamma+2k pi)^2/2t} v_n(gamma+2k pi, t),
// grouped (k,-k) on [0, pi/2] and (k,-k-1) on (pi/2, pi].
inline double eval_PS(double gamma, double t, int n, const SeriesSpec& spec = {}) {
    require_dimension(n);
    require_time(t);
    if (!(gamma >= 0.0 && gamma <= pi)) throw DomainError("gamma must lie in [0, pi]");
    if (!(spec.tail_tol > 0)) throw DomainError("tail_tol must be positive");
    // past t = 2 the prefactor e^{n^2 t/2} cancels against the pair sums and
    // costs digits, while the eigenfunction expansion needs only a few terms
    if (t > spectral_switch_time && spec.k_max == 0) return eval_PS_spectral(gamma, t, n);
    const int kmax = spec.k_max > 0 ? spec.k_max : default_kmax(t, spec.tail_tol);
    if (spec.k_max > 0 && ps_tail_bound(t, kmax) > spec.tail_tol)
        throw SpecTooSmall("k_max = " + std::to_string(kmax) + " leaves a tail bound of " +
                           std::to_string(ps_tail_bound(t, kmax)));
    const Pairing mode = gamma <= pi / 2 ? Pairing::k_minus_k : Pairing::k_minus_k_minus_1;
    const cd z = I * gamma - pairing_center(mode);
    auto [lo, hi] = pair_range(mode, kmax);
    Scaled s = pair_sum(mode, n, z, t, lo, hi);
    const double pre = 0.5 * n * n * t - (n + 0.5) * std::log(2 * pi * t);
    return (s.value * std::exp(z * z / (2 * t) + s.log_scale + pre)).real();
}

// Leading small-time term (2 pi t)^{-(n+1/2)} e^{-gamma^2/2t} (gamma/sin gamma)^n.
inline double eval_PS_asymptotic(double gamma, double t, int n) {
    require_dimension(n);
    require_time(t);
    if (!(gamma > 0 && gamma < pi)) throw DomainError("gamma must lie in (0, pi)");
    return std::pow(2 * pi * t, -(n + 0.5)) * std::exp(-gamma * gamma / (2 * t)) *
           std::pow(gamma / std::sin(gamma), n);
}

} // namespace crheat
