#pragma once
// Truncated Taylor arithmetic. c[k] holds f^(k)(x0)/k!, so a Jet<T,1> is a
// dual number and higher N carries higher derivatives along.
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace crheat {

template <class T, std::size_t N>
struct Jet {
    std::array<T, N + 1> c{};

    Jet() = default;
    Jet(T v) { c.fill(T(0)); c[0] = v; } // NOLINT: implicit lift of constants

    static Jet variable(T x0) {
        Jet j(x0);
        if constexpr (N >= 1) j.c[1] = T(1);
        return j;
    }

    const T& value() const { return c[0]; }
    T& operator[](std::size_t k) { return c[k]; }
    const T& operator[](std::size_t k) const { return c[k]; }

    // k-th derivative at the expansion point
    T derivative(std::size_t k) const {
        T f = c[k];
        for (std::size_t i = 2; i <= k; ++i) f *= T(double(i));
        return f;
    }

    Jet& operator+=(const Jet& o) { for (std::size_t k = 0; k <= N; ++k) c[k] += o.c[k]; return *this; }
    Jet& operator-=(const Jet& o) { for (std::size_t k = 0; k <= N; ++k) c[k] -= o.c[k]; return *this; }
    Jet& operator*=(const Jet& o) { *this = *this * o; return *this; }
    Jet& operator/=(const Jet& o) { *this = *this / o; return *this; }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator-(Jet a) { for (auto& x : a.c) x = -x; return a; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        r.c.fill(T(0));
        for (std::size_t i = 0; i <= N; ++i)
            for (std::size_t j = 0; i + j <= N; ++j) r.c[i + j] += a.c[i] * b.c[j];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet q;
        for (std::size_t k = 0; k <= N; ++k) {
            T s = a.c[k];
            for (std::size_t j = 0; j < k; ++j) s -= q.c[j] * b.c[k - j];
            q.c[k] = s / b.c[0];
        }
        return q;
    }
    friend Jet operator*(Jet a, T s) { for (auto& x : a.c) x *= s; return a; }
    friend Jet operator*(T s, Jet a) { return a * s; }
    friend Jet operator/(Jet a, T s) { for (auto& x : a.c) x /= s; return a; }
    friend Jet operator+(Jet a, T s) { a.c[0] += s; return a; }
    friend Jet operator+(T s, Jet a) { a.c[0] += s; return a; }
    friend Jet operator-(Jet a, T s) { a.c[0] -= s; return a; }
    friend Jet operator-(T s, Jet a) { return (-a) + s; }
};

// Derivative in the expansion variable. The top coefficient becomes unknown
// and is set to zero, so each call lowers the trustworthy order by one.
template <class T, std::size_t N>
Jet<T, N> differentiate(const Jet<T, N>& a) {
    Jet<T, N> r;
    r.c.fill(T(0));
    for (std::size_t k = 0; k < N; ++k) r.c[k] = T(double(k + 1)) * a.c[k + 1];
    return r;
}

// f(g) from the Taylor coefficients a[k] = f^(k)(g0)/k!.
template <class T, std::size_t N>
Jet<T, N> compose(const Jet<T, N>& g, const std::array<T, N + 1>& a) {
    Jet<T, N> h = g;
    h.c[0] = T(0);
    Jet<T, N> r(a[N]);
    for (std::size_t k = N; k-- > 0;) r = r * h + a[k];
    return r;
}

template <class T, std::size_t N>
Jet<T, N> exp(const Jet<T, N>& g) {
    using std::exp;
    std::array<T, N + 1> a;
    T e = exp(g.c[0]);
    double fact = 1.0;
    for (std::size_t k = 0; k <= N; ++k) {
        if (k > 0) fact *= double(k);
        a[k] = e / fact;
    }
    return compose(g, a);
}

template <class T, std::size_t N>
Jet<T, N> sinh(const Jet<T, N>& g) {
    using std::cosh;
    using std::sinh;
    std::array<T, N + 1> a;
    T s = sinh(g.c[0]), ch = cosh(g.c[0]);
    double fact = 1.0;
    for (std::size_t k = 0; k <= N; ++k) {
        if (k > 0) fact *= double(k);
        a[k] = (k % 2 == 0 ? s : ch) / fact;
    }
    return compose(g, a);
}

template <class T, std::size_t N>
Jet<T, N> cosh(const Jet<T, N>& g) {
    using std::cosh;
    using std::sinh;
    std::array<T, N + 1> a;
    T s = sinh(g.c[0]), ch = cosh(g.c[0]);
    double fact = 1.0;
    for (std::size_t k = 0; k <= N; ++k) {
        if (k > 0) fact *= double(k);
        a[k] = (k % 2 == 0 ? ch : s) / fact;
    }
    return compose(g, a);
}

template <class T, std::size_t N>
Jet<T, N> sqrt(const Jet<T, N>& g) {
    using std::sqrt;
    std::array<T, N + 1> a;
    T r = sqrt(g.c[0]);
    // binomial series of (g0 + h)^(1/2)
    T coef = r;
    for (std::size_t k = 0; k <= N; ++k) {
        a[k] = coef;
        coef *= T((0.5 - double(k)) / double(k + 1)) / g.c[0];
    }
    return compose(g, a);
}

// sinh(z)/z, by its power series near the origin and by exponentials elsewhere.
template <class T, std::size_t N>
Jet<T, N> sinhc(const Jet<T, N>& z) {
    using std::abs;
    if (abs(z.c[0]) < 1.0) {
        Jet<T, N> z2 = z * z;
        constexpr int M = 13;
        Jet<T, N> r(T(1));
        for (int m = M; m >= 1; --m) r = T(1) + z2 * r / T(double((2 * m) * (2 * m + 1)));
        return r;
    }
    return (exp(z) - exp(-z)) / (T(2) * z);
}

template <class T>
T sinhc(T z) {
    Jet<T, 0> j(z);
    return sinhc(j).c[0];
}

} // namespace crheat
