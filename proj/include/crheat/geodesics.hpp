#pragma once
// CR-geodesics from the base point: boundary values phi1(eta), branch
// enumeration, lengths, the Carnot-Caratheodory distance, and the
// bicharacteristic flow.
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "sphere_geom.hpp"

namespace crheat {

struct GeodesicBranch {
    int k = 0;
    int j = 2;            // 1: decreasing piece, 2: increasing piece
    int multiplicity = 1; // 2 at a tangency
    double eta = 0.0;
    double alpha_sq = 0.0;
    double tau1_t = 0.0;
    double length = 0.0;
};

struct CCDistance {
    double value = 0.0;
    std::optional<GeodesicBranch> branch; // empty on the canonical curve and at the base point
};

namespace detail {
// sqrt(1 - sin^2 theta / sin^2 eta) written to avoid cancellation near eta = theta
inline double geo_s(double theta, double eta_red) {
    double num = std::sin(eta_red - theta) * std::sin((pi - eta_red) - theta);
    if (num < 0) {
        if (num < -1e-14) throw DomainError("sin^2 theta1 > sin^2 eta: no geodesic with this eta");
        num = 0;
    }
    return std::sqrt(num) / std::abs(std::sin(eta_red));
}
} // namespace detail

// Boundary value phi1 reached by the geodesic with parameter eta >= 0.
// On [k pi + theta, (k+1) pi - theta] it is the k = 0 profile shifted by k pi (1 - s).
inline double phi_of_eta(double theta1, double eta) {
    if (!(theta1 > 0 && theta1 <= pi / 2)) throw DomainError("phi_of_eta needs theta1 in (0, pi/2]");
    if (eta < 0) return -phi_of_eta(theta1, -eta);
    const double k = std::floor(eta / pi);
    const double er = eta - k * pi;
    const double s = detail::geo_s(theta1, er);
    const double c = std::cos(er) / std::sin(er);
    double T = (s == 0 && std::abs(c) < 1e-300) ? pi / 2 : std::atan2(s, c);
    return -er * s + T + k * pi * (1 - s);
}

inline double branch_length(double theta1, double eta) {
    if (eta == 0.0) return std::sin(theta1);
    const double se = std::sin(eta);
    if (std::abs(se) < 1e-300 || (std::abs(se) < 1e-15 && std::abs(eta) > 1.0))
        throw PoleError("branch_length: sin(eta) = 0");
    return std::sin(theta1) * std::abs(eta / se);
}

// eta_k: root of tan(eta) = eta in (k pi, k pi + pi/2), k >= 1.
inline double tan_fixed_point(int k) {
    if (k < 1) throw DomainError("tan_fixed_point needs k >= 1");
    double lo = k * pi, hi = k * pi + pi / 2;
    auto f = [](double e) { return std::sin(e) - e * std::cos(e); };
    const double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        ((f(mid) > 0) == (flo > 0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline GeodesicBranch make_branch(double theta1, double eta, int k, int j) {
    GeodesicBranch b;
    b.k = k;
    b.j = j;
    b.eta = eta;
    const double se = std::sin(eta);
    b.alpha_sq = std::min(1.0, std::sin(theta1) * std::sin(theta1) / (se * se));
    b.tau1_t = eta * std::sqrt(1.0 - b.alpha_sq);
    b.length = branch_length(theta1, eta);
    return b;
}

namespace detail {
// Root of phi_of_eta(theta, .) = target on [lo, hi] where the function is monotone.
inline double bisect_phi(double theta, double target, double lo, double hi) {
    const double flo = phi_of_eta(theta, lo) - target;
    if (flo == 0) return lo;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = phi_of_eta(theta, mid) - target;
        ((fm > 0) == (flo > 0) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}
} // namespace detail

// All branches with even k <= k_cap, sorted by eta. Negative phi1 mirrors eta.
inline std::vector<GeodesicBranch> enumerate_branches(const SpherePoint& p, int k_cap = 8) {
    const double th = p.theta1, ph = std::abs(p.phi1);
    if (!(th > 0)) throw DomainError("enumerate_branches needs theta1 > 0; use theta0_lengths on the canonical curve");
    if (k_cap < 0) throw DomainError("k_cap must be >= 0");
    std::vector<GeodesicBranch> out;
    if (th >= pi / 2) {
        out.push_back(make_branch(pi / 2, pi / 2, 0, 2));
    } else {
        // k = 0: phi increases from 0 to pi on [theta, pi - theta]
        double e0 = ph == 0 ? th : detail::bisect_phi(th, ph, th, pi - th);
        out.push_back(make_branch(th, e0, 0, 2));
        for (int k = 2; k <= k_cap; k += 2) {
            const double ek = tan_fixed_point(k);
            if (th >= ek - k * pi) break; // monotone piece only, starts at k pi > phi1; later k empty too
            const double m = phi_of_eta(th, ek);
            if (std::abs(m - ph) <= 1e-12) {
                auto b = make_branch(th, ek, k, 1);
                b.multiplicity = 2;
                out.push_back(b);
                continue;
            }
            // minima grow with k, so once above phi1 nothing further can appear
            if (m > ph) break;
            out.push_back(make_branch(th, detail::bisect_phi(th, ph, k * pi + th, ek), k, 1));
            out.push_back(make_branch(th, detail::bisect_phi(th, ph, ek, (k + 1) * pi - th), k, 2));
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.eta < b.eta; });
    if (p.phi1 < 0)
        for (auto& b : out) {
            b.eta = -b.eta;
            b.tau1_t = -b.tau1_t;
        }
    return out;
}

// Total geodesic count (tangencies counted twice).
inline int branch_count(const std::vector<GeodesicBranch>& bs) {
    int c = 0;
    for (const auto& b : bs) c += b.multiplicity;
    return c;
}

// Independent count: sign changes of phi_of_eta - phi1 on a uniform eta grid.
inline int branch_count_by_scan(const SpherePoint& p, int k_cap = 8, double step = 1e-4) {
    const double th = p.theta1, ph = std::abs(p.phi1);
    int count = 0;
    for (int k = 0; k <= k_cap; k += 2) {
        const double lo = k * pi + th, hi = (k + 1) * pi - th;
        if (hi < lo) break;
        const int N = std::max(2, int(std::ceil((hi - lo) / step)));
        double prev = phi_of_eta(th, lo) - ph;
        if (prev == 0) ++count;
        for (int i = 1; i <= N; ++i) {
            double e = i == N ? hi : lo + (hi - lo) * i / N;
            double cur = phi_of_eta(th, e) - ph;
            if ((cur > 0 && prev < 0) || (cur < 0 && prev > 0) || (cur == 0 && prev != 0)) ++count;
            prev = cur;
        }
    }
    return count;
}

// Lengths sqrt((2(k+1) pi - |phi1|) |phi1|) of the geodesics along theta1 = 0.
inline std::vector<double> theta0_lengths(double phi1, int k_cap) {
    const double ph = std::abs(phi1);
    if (!(ph > 0 && ph <= pi)) throw DomainError("theta0_lengths needs 0 < |phi1| <= pi");
    std::vector<double> out;
    for (int k = 0; k <= k_cap; ++k) out.push_back(std::sqrt((2 * (k + 1) * pi - ph) * ph));
    return out;
}

inline CCDistance carnot_distance(const SpherePoint& p) {
    const double ph = std::abs(p.phi1);
    if (p.theta1 == 0.0) {
        if (ph == 0.0) return {0.0, std::nullopt};
        return {std::sqrt((2 * pi - ph) * ph), std::nullopt};
    }
    if (ph == 0.0) return {p.theta1, make_branch(p.theta1, p.theta1, 0, 2)};
    auto bs = enumerate_branches(p, 0);
    return {bs.front().length, bs.front()};
}

// ---- bicharacteristic flow -------------------------------------------------

struct HamiltonianState {
    double s = 0.0;
    double theta1 = 0.0;
    double phi1 = 0.0;
    double omega1 = 0.0;
    double tau1 = 0.0;
    double H = 0.0;
};

inline double hamiltonian(double theta, double omega, double tau) {
    double tt = std::tan(theta);
    return 0.5 * (omega * omega + tau * tau * tt * tt);
}

// RK4 for theta' = omega, omega' = -tau^2 tan(theta) sec^2(theta), phi' = tau tan^2(theta),
// starting at the base point with omega = E.
inline std::vector<HamiltonianState> integrate_bicharacteristic(double E, double tau1, double t_end, int steps) {
    if (!(E > 0)) throw DomainError("E must be positive");
    if (!(t_end > 0) || steps < 1) throw DomainError("need t_end > 0 and steps >= 1");
    struct Y {
        double th, om, ph;
    };
    auto rhs = [tau1](const Y& y) {
        if (tau1 == 0.0) return Y{y.om, 0.0, 0.0};
        double tt = std::tan(y.th), c = std::cos(y.th);
        return Y{y.om, -tau1 * tau1 * tt / (c * c), tau1 * tt * tt};
    };
    auto axpy = [](const Y& a, double h, const Y& d) { return Y{a.th + h * d.th, a.om + h * d.om, a.ph + h * d.ph}; };
    const double h = t_end / steps;
    Y y{0.0, E, 0.0};
    std::vector<HamiltonianState> out;
    out.reserve(steps + 1);
    out.push_back({0.0, y.th, y.ph, y.om, tau1, hamiltonian(y.th, y.om, tau1)});
    for (int i = 1; i <= steps; ++i) {
        Y k1 = rhs(y);
        Y k2 = rhs(axpy(y, h / 2, k1));
        Y k3 = rhs(axpy(y, h / 2, k2));
        Y k4 = rhs(axpy(y, h, k3));
        y.th += h / 6 * (k1.th + 2 * k2.th + 2 * k3.th + k4.th);
        y.om += h / 6 * (k1.om + 2 * k2.om + 2 * k3.om + k4.om);
        y.ph += h / 6 * (k1.ph + 2 * k2.ph + 2 * k3.ph + k4.ph);
        out.push_back({i * h, y.th, y.ph, y.om, tau1, hamiltonian(y.th, y.om, tau1)});
    }
    return out;
}

struct ClosedFormPoint {
    double sin2_theta;
    double phi1;
};

// sin^2 theta1(s) = (E/Omega)^2 sin^2(Omega s), phi1(s) = atan((tau/Omega) tan(Omega s)) - tau s,
// with the arctangent unwrapped across Omega s = pi/2 + pi Z.
inline ClosedFormPoint bicharacteristic_closed_form(double E, double tau1, double s) {
    const double Om = std::sqrt(E * E + tau1 * tau1);
    const double x = Om * s;
    const double sn = std::sin(x);
    const double sgn = tau1 > 0 ? 1.0 : tau1 < 0 ? -1.0 : 0.0;
    const double ph = std::atan(tau1 / Om * std::tan(x)) + sgn * pi * std::round(x / pi);
    return {E * E / (Om * Om) * sn * sn, ph - tau1 * s};
}

// max |phi1' cos^2 theta1 - tau1 sin^2 theta1| with phi1' from a 5-point stencil on the samples.
inline double cr_defect(const std::vector<HamiltonianState>& traj) {
    if (traj.size() < 5) throw DomainError("cr_defect needs at least 5 samples");
    const double h = traj[1].s - traj[0].s;
    double worst = 0.0;
    for (std::size_t i = 2; i + 2 < traj.size(); ++i) {
        double dphi = (-traj[i + 2].phi1 + 8 * traj[i + 1].phi1 - 8 * traj[i - 1].phi1 + traj[i - 2].phi1) / (12 * h);
        double c = std::cos(traj[i].theta1), sn = std::sin(traj[i].theta1);
        worst = std::max(worst, std::abs(dphi * c * c - traj[i].tau1 * sn * sn));
    }
    return worst;
}

// Initial data (E, tau1) of the bicharacteristic that reaches the branch target at s = 1.
inline std::pair<double, double> branch_initial_data(const GeodesicBranch& b) { return {b.length, b.tau1_t}; }

} // namespace crheat
