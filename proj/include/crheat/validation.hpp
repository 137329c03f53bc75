#pragma once
// The verification suite behind `crheat validate`. Every check reports one or
// more rows with a measured value and an accepted window.
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "asymptotics.hpp"
#include "coefficients.hpp"
#include "complex_action.hpp"
#include "cr_kernel.hpp"
#include "elliptic_kernel.hpp"
#include "geodesics.hpp"
#include "identities.hpp"
#include "parallel.hpp"
#include "sphere_geom.hpp"

namespace crheat {

struct CheckResult {
    std::string check;
    std::string name;
    double measured = 0.0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    bool pass = false;
};

struct ValidateConfig {
    std::uint64_t seed = 7;
    double tol_scale = 1.0; // multiplies every upper tolerance
    std::string only;       // empty runs every check
};

inline const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = {
        "normalization", "pde_residual",  "representation", "coefficients", "integral_identities",
        "geodesic_ode",  "branches",      "distance",       "critical_points", "asymptotics"};
    return names;
}

namespace detail {

// Uniform doubles from the raw engine output, so the sample points do not
// depend on the standard library's distribution implementation.
class Sampler {
  public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double a, double b) { return a + (b - a) * double(rng_() >> 11) * 0x1.0p-53; }
    bool coin() { return rng_() >> 63; }

  private:
    std::mt19937_64 rng_;
};

inline std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

class Report {
  public:
    Report(std::string check, double scale) : check_(std::move(check)), scale_(scale) {}

    void at_most(const std::string& name, double measured, double tol) {
        add(name, measured, -std::numeric_limits<double>::infinity(), tol * scale_);
    }
    void at_least(const std::string& name, double measured, double lo) {
        add(name, measured, lo, std::numeric_limits<double>::infinity());
    }
    void within(const std::string& name, double measured, double lo, double hi) { add(name, measured, lo, hi); }

    std::vector<CheckResult> rows;

  private:
    void add(const std::string& name, double m, double lo, double hi) {
        rows.push_back({check_, name, m, lo, hi, std::isfinite(m) && m >= lo && m <= hi});
    }
    std::string check_;
    double scale_;
};

// Sample points shared by several checks.
inline std::vector<SpherePoint> sample_points(Sampler& s, int count, double th_lo, double th_hi, double ph_lo,
                                              double ph_hi) {
    std::vector<SpherePoint> out;
    for (int i = 0; i < count; ++i) {
        double th = s.uniform(th_lo, th_hi);
        double ph = s.uniform(ph_lo, ph_hi);
        out.emplace_back(th, ph);
    }
    return out;
}

inline double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::isfinite(x) ? std::max(m, x) : std::numeric_limits<double>::infinity();
    return m;
}

// ---------------------------------------------------------------------------

inline void check_normalization(Report& r) {
    EvalSpec spec;
    spec.quad_tol = 1e-12;
    for (int n : {1, 2})
        for (double t : {0.25, 0.5, 1.0}) {
            double I = integrate_reduced(
                [&](double th, double ph) { return eval_PC_series(SpherePoint(th, ph), t, n, spec).value; }, n, 2, 4);
            r.at_most(fmt("P_C n=%g t=%g |integral-1|", n, t), std::abs(I - 1), 1e-6);
        }
    for (int n : {1, 2})
        for (double t : {0.25, 0.5, 1.0}) {
            double I = integrate_zonal([&](double x) { return eval_PS(std::acos(x), t, n); }, n);
            r.at_most(fmt("P_S n=%g t=%g |integral-1|", n, t), std::abs(I - 1), 1e-8);
        }
}

inline double pc_residual(const SpherePoint& p, double t, int n, double h, const EvalSpec& spec) {
    auto f = [&](double a, double b) { return eval_PC_series(SpherePoint(a, b), t, n, spec).value; };
    auto ft = [&](double s) { return eval_PC_series(p, s, n, spec).value; };
    const double L = apply_L_C(f, p, n, h);
    const double dt = d1(ft, t, t * 1e-3);
    return std::abs(L - dt) / std::abs(dt);
}

inline double ps_residual(double gamma, double t, int n, double h) {
    auto f = [&](double g) { return eval_PS(g, t, n); };
    auto ft = [&](double s) { return eval_PS(gamma, s, n); };
    const double L = apply_L_S(f, gamma, n, h);
    const double dt = d1(ft, t, t * 1e-3);
    return std::abs(L - dt) / std::abs(dt);
}

// Smallest residual ratio between successive step halvings, counting only
// steps whose finer residual is still above the noise floor.
inline double stencil_order_ratio(const std::function<double(double)>& residual, double h0, double floor) {
    double prev = residual(h0), worst = std::numeric_limits<double>::infinity();
    for (double h = h0 / 2; h > h0 / 64; h /= 2) {
        double cur = residual(h);
        if (cur < floor) break;
        worst = std::min(worst, prev / cur);
        prev = cur;
    }
    return worst;
}

inline void check_pde_residual(Report& r) {
    EvalSpec spec;
    spec.quad_tol = 1e-12;
    for (int n : {1, 2})
        for (double t : {0.5, 1.0}) {
            std::vector<SpherePoint> pts;
            for (double th : {0.4, 0.8, 1.2})
                for (double ph : {0.5, 1.5, 2.5}) pts.emplace_back(th, ph);
            auto res = parallel_map<double>(pts.size(), [&](std::size_t i) { return pc_residual(pts[i], t, n, 1e-3, spec); });
            r.at_most(fmt("P_C n=%g t=%g max relative residual over 9 points", n, t), max_of(res), 1e-4);
        }
    r.at_least("P_C stencil convergence ratio per halving at (0.8, 1.5), t=0.5, n=1",
               stencil_order_ratio([&](double h) { return pc_residual(SpherePoint(0.8, 1.5), 0.5, 1, h, spec); },
                                   0.2, 1e-8),
               8.0);
    for (int n : {1, 2})
        for (double t : {0.5, 1.0, 2.0}) {
            std::vector<double> res;
            for (int i = 0; i < 5; ++i) res.push_back(ps_residual(0.3 + i * 2.5 / 4, t, n, 1e-3));
            r.at_most(fmt("P_S n=%g t=%g max relative residual over 5 angles", n, t), max_of(res), 1e-5);
        }
    r.at_least("P_S stencil convergence ratio per halving at gamma=1, t=0.5, n=2",
               stencil_order_ratio([](double h) { return ps_residual(1.0, 0.5, 2, h); }, 0.2, 1e-10), 8.0);
}

inline void check_representation(Report& r, Sampler& s) {
    struct Case {
        SpherePoint p;
        double t;
        int n;
    };
    std::vector<Case> cases;
    for (int n : {1, 2})
        for (int i = 0; i < 10; ++i) {
            double th = s.uniform(0.2, 1.3), ph = s.uniform(0.2, 2.8);
            cases.push_back({SpherePoint(th, ph), s.coin() ? 1.0 : 0.5, n});
        }
    EvalSpec spec;
    spec.quad_tol = 1e-12;
    auto rel = parallel_map<double>(cases.size(), [&](std::size_t i) {
        const Case& c = cases[i];
        double a = eval_PC_series(c.p, c.t, c.n, spec).value;
        double b = eval_PC_contour(c.p, c.t, c.n, 1.0, spec).value;
        return std::abs(a - b) / std::abs(a);
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const Case& c = cases[i];
        r.at_most(fmt("series vs contour n=%g at (%.4f, %.4f) t=%g", c.n, c.p.theta1, c.p.phi1, c.t), rel[i],
                  c.n == 1 ? 1e-8 : 1e-6);
    }
}

inline void check_coefficients(Report& r, Sampler& s) {
    std::vector<cd> kappas;
    for (int i = 0; i < 6; ++i) kappas.emplace_back(s.uniform(0.2, 3.0), 0.0);
    for (int i = 0; i < 6; ++i) kappas.emplace_back(0.0, s.uniform(0.2, 2.8));
    for (int i = 0; i < 8; ++i) kappas.emplace_back(s.uniform(0.2, 2.0), s.uniform(0.2, 2.5));

    for (int n : {2, 3}) {
        double worst = 0.0, vanish = 0.0;
        for (cd k : kappas) {
            auto c = Vn_coefficients(n, k, n + 1);
            cd Vn = std::pow(V_profile(k), n);
            for (int l = 1; l < n; ++l) {
                cd closed = c[l] / Vn;
                cd iter = Wnl_iterative(n, l, k);
                worst = std::max(worst, std::abs(closed - iter) / std::max(std::abs(closed), 1.0));
            }
            for (int l = n; l <= n + 1; ++l) vanish = std::max(vanish, std::abs(c[l]) / std::abs(c[0]));
        }
        r.at_most(fmt("closed vs iterative W_{n,l}, n=%g, 20 kappa", n), worst, 1e-8);
        r.at_most(fmt("t^l coefficients with l >= n, n=%g", n), vanish, 1e-10);
    }
    double pt = 0.0, eig = 0.0;
    for (int i = 0; i < 10; ++i) {
        double g = 0.2 + 0.3 * i;
        double v = v21_closed(g);
        pt = std::max(pt, std::abs(Vn_coefficients(2, I * g)[1].real() - v) / std::max(std::abs(v), 1.0));
        eig = std::max(eig, std::abs(apply_L_S(v21_closed, g, 2) - 2 * v) / std::max(std::abs(v), 1.0));
    }
    r.at_most("v_{2,1} closed form vs t-coefficient, 10 angles", pt, 1e-10);
    r.at_most("L_S v_{2,1} = 2 v_{2,1}, 10 angles", eig, 1e-6);
}

inline void check_integral_identities(Report& r) {
    double worst = 0.0;
    for (double A : {1.5, 2.0, 3.0})
        for (int k = 0; k <= 4; ++k) {
            double q = moment_derivative_quadrature(k, A), c = moment_derivative_closed(k, A);
            worst = std::max(worst, std::abs(q - c) / std::abs(c));
        }
    r.at_most("k-th derivative of the (1-u)^k moment, k=0..4, A in {1.5,2,3}", worst, 1e-10);
    worst = 0.0;
    for (double a : {1.0, 2.0})
        for (double t : {0.5, 1.0}) {
            auto q = vertical_line_integral(a, t, 1.0);
            auto c = vertical_line_closed(a, t);
            worst = std::max(worst, std::abs(q - c) / std::abs(c));
        }
    r.at_most("vertical-line Laplace integral, alpha in {1,2}, t in {0.5,1}", worst, 1e-8);
}

inline void check_geodesic_ode(Report& r) {
    for (auto [E, tau] : std::vector<std::pair<double, double>>{{1, 0}, {2, 1}, {3, -2}})
        for (double te : {0.5, 0.9}) {
            auto traj = integrate_bicharacteristic(E, tau, te, 10000);
            auto cf = bicharacteristic_closed_form(E, tau, te);
            double st = std::sin(traj.back().theta1);
            double err = std::max(std::abs(st * st - cf.sin2_theta), std::abs(traj.back().phi1 - cf.phi1));
            double drift = 0.0;
            for (const auto& x : traj) drift = std::max(drift, std::abs(x.H - traj.front().H));
            std::string tag = fmt("(E, tau1)=(%g, %g) s=%g", E, tau, te);
            r.at_most("endpoint vs closed form " + tag, err, 1e-8);
            r.at_most("energy drift " + tag, drift, 1e-10);
            r.at_most("CR defect " + tag, cr_defect(traj), 1e-8);
        }
}

inline void check_branches(Report& r, Sampler& s) {
    // log-uniform theta1 so that the multi-branch regime near 0 is sampled
    std::vector<SpherePoint> pts;
    for (int i = 0; i < 25; ++i) {
        double th = 0.01 * std::pow(157.0, s.uniform(0.0, 1.0));
        pts.emplace_back(th, s.uniform(0.01, pi));
    }
    const double single_window = tan_fixed_point(2) - 2 * pi;
    int even = 0, single_bad = 0, scan_bad = 0, order_bad = 0, multi = 0;
    for (const auto& p : pts) {
        auto bs = enumerate_branches(p);
        int c = branch_count(bs);
        if (c % 2 == 0) ++even;
        if (c > 1) ++multi;
        if (p.theta1 >= single_window && c != 1) ++single_bad;
        if (branch_count_by_scan(p) != c) ++scan_bad;
        for (std::size_t i = 1; i < bs.size(); ++i)
            if (!(bs[i].length > bs[i - 1].length)) ++order_bad;
    }
    for (double th : {1.45, 1.5, pi / 2})
        for (double ph : {0.3, 1.7, 3.0})
            if (branch_count(enumerate_branches(SpherePoint(th, ph))) != 1) ++single_bad;
    r.at_most("points with an even branch count (25 seeded)", even, 0);
    r.at_most("points above the single-branch window with more than one branch", single_bad, 0);
    r.at_most("points where the count differs from the 1e-4 grid scan", scan_bad, 0);
    r.at_most("non-increasing consecutive lengths", order_bad, 0);
    r.at_least("seeded points with several branches (coverage)", multi, 1);
}

inline void check_distance(Report& r, Sampler& s) {
    double worst = 0.0;
    for (double th : {0.1, 0.5, 1.0, 1.5}) worst = std::max(worst, std::abs(carnot_distance(SpherePoint(th, 0)).value - th));
    r.at_most("d_c(theta1, 0) = theta1", worst, 1e-12);
    worst = 0.0;
    for (double ph : {0.5, pi / 2, pi}) {
        double d = carnot_distance(SpherePoint(0, ph)).value;
        worst = std::max(worst, std::abs(d * d - (2 * pi - ph) * ph));
    }
    r.at_most("d_c(0, phi1)^2 = (2 pi - phi1) phi1", worst, 1e-12);
    worst = 0.0;
    for (const auto& p : sample_points(s, 20, 0.05, 1.5, 0.05, pi - 0.05)) {
        double d = carnot_distance(p).value;
        worst = std::max(worst, std::abs(2 * first_critical_point(p).g_value - d * d));
    }
    r.at_most("2 g(i psi) = d_c^2 at 20 seeded points", worst, 1e-10);
    worst = 0.0;
    for (double ph : {0.5, 1.0, 2.0}) {
        double d1 = carnot_distance(SpherePoint(0.05, ph)).value;
        double d2 = carnot_distance(SpherePoint(0.025, ph)).value;
        worst = std::max(worst, std::abs(2 * d2 - d1 - std::sqrt((2 * pi - ph) * ph)));
    }
    r.at_most("theta1 -> 0 limit by extrapolation, phi1 in {0.5, 1, 2}", worst, 1e-3);
}

inline void check_critical_points(Report& r, Sampler& s) {
    std::vector<double> us;
    for (int i = 0; i < 50; ++i) us.push_back(0.1 * i);
    int wrong_sign = 0;
    double at_zero = 0.0, min_slope = std::numeric_limits<double>::infinity();
    for (const auto& p : sample_points(s, 5, 0.1, 1.4, 0.1, 3.0)) {
        for (double v : {0.0, 0.6, 1.2, 1.8, 2.4}) {
            auto d = monotonicity_scan(p, v, us);
            at_zero = std::max(at_zero, std::abs(d[0]));
            for (std::size_t i = 1; i < d.size(); ++i)
                if (!(d[i] > 0)) ++wrong_sign;
        }
        for (int i = 1; i <= 50; ++i) min_slope = std::min(min_slope, critical_equation_slope(p, pi * i / 51.0));
    }
    r.at_most("grid points with u > 0 and d Re g/du <= 0 (5 points x 50 x 5)", wrong_sign, 0);
    r.at_most("|d Re g/du| at u = 0", at_zero, 1e-12);
    r.at_least("minimum slope of the critical-point equation", min_slope, 1e-300);
}

// Fit E(t) = d + a t + b t ln t through three samples; returns d.
inline double extrapolate_exponent(const double (&t)[3], const double (&E)[3]) {
    Eigen::Matrix3d A;
    Eigen::Vector3d y;
    for (int i = 0; i < 3; ++i) {
        A(i, 0) = 1;
        A(i, 1) = t[i];
        A(i, 2) = t[i] * std::log(t[i]);
        y(i) = E[i];
    }
    return A.fullPivLu().solve(y)(0);
}

inline void check_asymptotics(Report& r) {
    struct Case {
        double th, ph;
        int n;
    };
    std::vector<Case> cases;
    for (int n : {1, 2})
        for (auto [th, ph] : std::vector<std::pair<double, double>>{{0.8, 0.0}, {0.5, 1.0}, {0.3, 2.0}, {1.0, 0.5}, {0.6, 2.8}})
            cases.push_back({th, ph, n});
    for (int n : {1, 2})
        for (double ph : {0.5, 1.5}) cases.push_back({0.0, ph, n});
    const double ts[3] = {0.1, 0.05, 0.025};
    for (const auto& c : cases) {
        SpherePoint p(c.th, c.ph);
        double dev[3], E[3];
        for (int i = 0; i < 3; ++i) {
            double P = eval_PC_series(p, ts[i], c.n).value;
            dev[i] = std::abs(P / leading_PC(p, ts[i], c.n).leading - 1);
            E[i] = -2 * ts[i] * std::log(std::pow(2 * pi * ts[i], c.n + 1) * std::exp(-0.5 * c.n * c.n * ts[i]) * P);
        }
        std::string tag = fmt("n=%g at (%g, %g)", c.n, c.th, c.ph);
        r.within("deviation ratio t=0.1/0.05 " + tag, dev[0] / dev[1], 1.5, 3.0);
        r.within("deviation ratio t=0.05/0.025 " + tag, dev[1] / dev[2], 1.5, 3.0);
        const double d = carnot_distance(p).value;
        r.at_most("extrapolated exponent vs d_c^2 " + tag, std::abs(extrapolate_exponent(ts, E) - d * d), 1e-2);
    }
}

} // namespace detail

// Runs the selected checks in a fixed order. Each check draws from its own
// generator seeded from cfg.seed, so --only does not shift the samples.
inline std::vector<CheckResult> run_checks(const ValidateConfig& cfg) {
    if (!cfg.only.empty()) {
        bool known = false;
        for (const auto& n : check_names()) known |= n == cfg.only;
        if (!known) throw DomainError("unknown check '" + cfg.only + "'");
    }
    if (!(cfg.tol_scale > 0)) throw DomainError("tolerance multiplier must be positive");
    std::vector<CheckResult> out;
    for (std::size_t i = 0; i < check_names().size(); ++i) {
        const std::string& name = check_names()[i];
        if (!cfg.only.empty() && cfg.only != name) continue;
        detail::Report r(name, cfg.tol_scale);
        detail::Sampler s(cfg.seed * 1000003u + i);
        switch (i) {
        case 0: detail::check_normalization(r); break;
        case 1: detail::check_pde_residual(r); break;
        case 2: detail::check_representation(r, s); break;
        case 3: detail::check_coefficients(r, s); break;
        case 4: detail::check_integral_identities(r); break;
        case 5: detail::check_geodesic_ode(r); break;
        case 6: detail::check_branches(r, s); break;
        case 7: detail::check_distance(r, s); break;
        case 8: detail::check_critical_points(r, s); break;
        case 9: detail::check_asymptotics(r); break;
        }
        out.insert(out.end(), r.rows.begin(), r.rows.end());
    }
    return out;
}

} // namespace crheat
