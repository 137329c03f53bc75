#pragma once
// Leading small-time behaviour of P_C.
#include <cmath>
#include <string>

#include "errors.hpp"
#include "geodesics.hpp"
#include "sphere_geom.hpp"

namespace crheat {

enum class AsymptoticRegime { generic, canonical_curve };

struct AsymptoticValue {
    double leading = 0.0;
    double d_c_sq = 0.0;
    double prefactor = 0.0;
    AsymptoticRegime regime = AsymptoticRegime::generic;
    std::string warning; // set when a point near theta1 = 0 is routed to the canonical-curve form
};

// Below this theta1 the generic form's 1/sin(theta1) dominates and the
// canonical-curve form is used instead.
inline constexpr double canonical_curve_threshold = 1e-3;

inline AsymptoticValue leading_PC(const SpherePoint& p, double t, int n) {
    require_dimension(n);
    if (!(t > 0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
    const double th = p.theta1, ph = std::abs(p.phi1);
    AsymptoticValue a;
    if (th < canonical_curve_threshold) {
        if (ph == 0.0 || ph >= pi)
            throw UnsupportedRegime("no small-time formula on the canonical curve at phi1 in {0, pi}");
        a.regime = AsymptoticRegime::canonical_curve;
        if (th > 0)
            a.warning = "theta1 < " + std::to_string(canonical_curve_threshold) +
                        ": using the theta1 = 0 form, continuity is only approximate";
        // (d^2/2pi)^{n-1} keeps the symmetry phi1 -> 2pi - phi1 of the kernel on this curve
        a.d_c_sq = (2 * pi - ph) * ph;
        a.prefactor = std::pow(a.d_c_sq / (2 * pi), n - 1) /
                      (std::pow(2.0, n) * std::tgamma(double(n)) * std::pow(t, 2 * n));
    } else {
        if (ph >= pi) throw UnsupportedRegime("no small-time formula at phi1 = pi");
        if (th >= pi / 2) throw UnsupportedRegime("small-time formula needs theta1 < pi/2");
        const CCDistance d = carnot_distance(p);
        const double eta = std::abs(d.branch->eta);
        const double v = eta / std::sin(eta);
        a.d_c_sq = d.value * d.value;
        a.prefactor = std::sin(eta) * std::pow(v, n) /
                      (std::pow(2 * pi * t, n + 0.5) * std::sin(th) * std::sqrt(1 - eta / std::tan(eta)));
    }
    a.leading = a.prefactor * std::exp(-a.d_c_sq / (2 * t));
    return a;
}

} // namespace crheat
