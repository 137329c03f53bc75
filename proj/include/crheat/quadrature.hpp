#pragma once
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace crheat::quad {

// Fixed composite Gauss-Legendre rule with P nodes per panel.
template <unsigned P = 20, class F>
auto composite_gauss(F&& f, double a, double b, int panels) {
    using R = std::invoke_result_t<F&, double>;
    R sum = R(0);
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        double lo = a + i * h;
        sum += boost::math::quadrature::gauss<double, P>::integrate(f, lo, lo + h);
    }
    return sum;
}

// Full node/weight list of the P-point Gauss-Legendre rule on [-1, 1].
template <unsigned P>
const std::vector<std::pair<double, double>>& gauss_rule() {
    static const std::vector<std::pair<double, double>> rule = [] {
        using G = boost::math::quadrature::gauss<double, P>;
        const auto& x = G::abscissa();
        const auto& w = G::weights();
        std::vector<std::pair<double, double>> r;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0.0) {
                r.emplace_back(0.0, w[i]);
            } else {
                r.emplace_back(-x[i], w[i]);
                r.emplace_back(x[i], w[i]);
            }
        }
        return r;
    }();
    return rule;
}

// Composite rule that hands each (node, weight) pair to a visitor; useful for
// vector-valued integrands.
template <unsigned P = 20, class V>
void for_each_node(double a, double b, int panels, V&& visit) {
    const double h = (b - a) / panels;
    for (int i = 0; i < panels; ++i) {
        double mid = a + (i + 0.5) * h;
        for (auto [x, w] : gauss_rule<P>()) visit(mid + 0.5 * h * x, 0.5 * h * w);
    }
}

template <class R>
struct Result {
    R value;
    double error;
    double l1;
};

// Adaptive Gauss-Kronrod. Throws NonConvergence when the error estimate
// stays above max(100 tol L1, abs_floor) at the depth limit.
template <class F>
auto adaptive(F&& f, double a, double b, double tol, unsigned max_depth = 18,
              double abs_floor = 0.0, const char* what = "adaptive quadrature") {
    using R = std::invoke_result_t<F&, double>;
    double err = 0.0, l1 = 0.0;
    R v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, max_depth, tol, &err, &l1);
    using std::abs;
    if (!std::isfinite(abs(v)) || err > std::max(100.0 * tol * l1, abs_floor)) {
        char buf[160];
        std::snprintf(buf, sizeof buf, ": error estimate %.3e exceeds tolerance (L1 %.3e)", err, l1);
        throw NonConvergence(std::string(what) + buf);
    }
    return Result<R>{v, err, l1};
}

} // namespace crheat::quad
