#pragma once
// Grouped theta-type sums shared by both kernels.
//
// Both kernels need S(kappa) = sum_k exp((kappa+2k pi i)^2/2t) V_n(kappa+2k pi i, t).
// Terms are grouped in pairs whose individual poles cancel:
//   kk  : k with -k, expanded around z = kappa        (singular only at kappa = +-i pi)
//   kk1 : k with -k-1, expanded around z = kappa - i pi (singular only at kappa = 0, 2 pi i)
// The grouped sum is returned relative to exp(z^2/2t) and with an explicit log
// scale, so that no intermediate exponential overflows.
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "coefficients.hpp"
#include "errors.hpp"
#include "jet.hpp"

namespace crheat {

enum class Pairing { automatic, k_minus_k, k_minus_k_minus_1 };

inline const char* pairing_name(Pairing p) {
    switch (p) {
    case Pairing::automatic: return "auto";
    case Pairing::k_minus_k: return "kk";
    case Pairing::k_minus_k_minus_1: return "kk1";
    }
    return "?";
}

inline Pairing parse_pairing(const std::string& s) {
    if (s == "auto") return Pairing::automatic;
    if (s == "kk") return Pairing::k_minus_k;
    if (s == "kk1") return Pairing::k_minus_k_minus_1;
    throw DomainError("unknown pairing '" + s + "' (expected auto, kk or kk1)");
}

// value * exp(log_scale)
struct Scaled {
    cd value = 0.0;
    double log_scale = 0.0;
    cd get() const { return value * std::exp(log_scale); }
};

// Offset between kappa and the expansion variable z of a pairing mode.
inline cd pairing_center(Pairing mode) {
    return mode == Pairing::k_minus_k_minus_1 ? I * pi : cd(0.0);
}

// Frequency q of pair j: kk uses 2 j pi (j = 0 is the unpaired k = 0 term),
// kk1 uses (2j+1) pi.
inline double pair_frequency(Pairing mode, int j) {
    return mode == Pairing::k_minus_k_minus_1 ? (2 * j + 1) * pi : 2 * j * pi;
}

// Largest exponent reached by the pairs j_lo..j_hi at z, used as a common scale.
inline double pair_log_scale(Pairing mode, cd z, double t, int j_lo, int j_hi) {
    double M = -INFINITY;
    for (int j = j_lo; j <= j_hi; ++j) {
        double q = pair_frequency(mode, j);
        M = std::max(M, q * std::abs(z.imag()) / t - q * q / (2 * t));
    }
    return M;
}

namespace detail {

// Direct evaluation by jets; not usable at z = 0 for n >= 2 (removable 0/0).
template <std::size_t N>
cd pair_sum_jet(Pairing mode, cd z0, double t, int j_lo, int j_hi, double M) {
    using J = Jet<cd, N>;
    const int n = int(N) + 1;
    const J Z = J::variable(z0);
    const double sign = mode == Pairing::k_minus_k_minus_1 ? -1.0 : 1.0;
    J S(cd(0.0));
    for (int j = j_lo; j <= j_hi; ++j) {
        if (mode == Pairing::k_minus_k && j == 0) {
            S += J(cd(std::exp(-M)));
            continue;
        }
        const double q = pair_frequency(mode, j);
        const double c = q * q / (2 * t);
        const J A = Z * (I * (q / t));
        const J ep = exp(A - cd(c + M));
        const J em = exp(-A - cd(c + M));
        J sc;
        if (std::abs(A.value()) > 0.5)
            sc = (ep - em) / (cd(2.0) * A);
        else
            sc = sinhc(A) * cd(std::exp(-(c + M)));
        S += (cd(0.5) * (ep + em) - cd(2 * c) * sc) * cd(2 * sign);
    }
    J G = S / sinhc(Z);
    for (int i = 1; i < n; ++i) G = twisted_derivative(G, Z, t) * cd(sign);
    return G.value();
}

inline cd pair_sum_direct(Pairing mode, int n, cd z0, double t, int j_lo, int j_hi, double M) {
    switch (n) {
    case 1: return pair_sum_jet<0>(mode, z0, t, j_lo, j_hi, M);
    case 2: return pair_sum_jet<1>(mode, z0, t, j_lo, j_hi, M);
    case 3: return pair_sum_jet<2>(mode, z0, t, j_lo, j_hi, M);
    default: return pair_sum_jet<3>(mode, z0, t, j_lo, j_hi, M);
    }
}

} // namespace detail

// Grouped sum over pairs j_lo..j_hi at z = kappa - center, including the
// (t d/d cosh)^{n-1} tower. Result relative to exp(z^2/2t).
inline Scaled pair_sum(Pairing mode, int n, cd z, double t, int j_lo, int j_hi) {
    if (mode == Pairing::automatic) throw DomainError("pair_sum needs a concrete pairing");
    if (n < 1 || n > 4) throw UnsupportedRegime("kernel evaluation supports n in {1,2,3,4}");
    if (j_hi < j_lo) return {};
    if (std::abs(std::abs(z.imag()) - pi) < 1e-12 && std::abs(z.real()) < 1e-12)
        throw PoleError(std::string("pairing ") + pairing_name(mode) + " is singular at this point");
    // the circle must stay small enough that e^{q rho/t} does not swamp the mean
    double rho = std::clamp(std::sqrt(t), 0.15, 0.5);
    const double q_lo = pair_frequency(mode, std::max(j_lo, mode == Pairing::k_minus_k ? 1 : 0));
    rho = std::min(rho, 8.0 * t / q_lo);
    if (n >= 2 && std::abs(z) < rho / 2) {
        // removable singularity at z = 0: mean value over a circle
        const int P = 48;
        cd vals[P];
        double Ms[P];
        double Mmax = -INFINITY;
        for (int k = 0; k < P; ++k) {
            cd zk = z + rho * std::polar(1.0, 2 * pi * (k + 0.5) / P);
            Ms[k] = pair_log_scale(mode, zk, t, j_lo, j_hi);
            vals[k] = detail::pair_sum_direct(mode, n, zk, t, j_lo, j_hi, Ms[k]);
            Mmax = std::max(Mmax, Ms[k]);
        }
        cd s = 0.0;
        for (int k = 0; k < P; ++k) s += vals[k] * std::exp(Ms[k] - Mmax);
        return {s / double(P), Mmax};
    }
    double M = pair_log_scale(mode, z, t, j_lo, j_hi);
    return {detail::pair_sum_direct(mode, n, z, t, j_lo, j_hi, M), M};
}

// Number of pairs so that the first omitted Gaussian factor is below tail_tol * e^{-10}.
inline int default_kmax(double t, double tail_tol) {
    const double target = -std::log(tail_tol) + 10.0;
    int k = 1;
    while ((2 * k * pi - pi) * (2 * k * pi - pi) / (2 * t) <= target) ++k;
    return k;
}

// Index range of pairs for a given kmax: kk covers k = -kmax..kmax,
// kk1 covers k = -kmax..kmax-1.
inline std::pair<int, int> pair_range(Pairing mode, int kmax) {
    return mode == Pairing::k_minus_k_minus_1 ? std::pair{0, kmax - 1} : std::pair{0, kmax};
}

} // namespace crheat
