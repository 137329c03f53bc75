#!/usr/bin/env python3
"""Reference values for the unit tests, computed with mpmath at 30 digits.

Each value comes from a formula that does not share code or structure with the
C++ implementation: raw (ungrouped) k-series on the original line for P_C,
the eigenfunction expansion for P_S, and the closed-form bicharacteristic for
the distance. Run it to regenerate the constants frozen in tests/.
"""
import mpmath as mp

mp.mp.dps = 30


def kappa(th, ph, u):
    """Principal arccosh of cos(th) cosh(u + i ph), imaginary part sharing the sign of ph."""
    k = mp.acosh(mp.cos(th) * mp.cosh(mp.mpc(u, ph)))
    if mp.re(k) < 0:
        k = -k
    if ph >= 0 and mp.im(k) < 0:
        k = mp.conj(k)
    return k


def V(k):
    return k / mp.sinh(k)


def Vn(n, k, t):
    """e^{-k^2/2t} (t d/d cosh k)^{n-1} [e^{k^2/2t} k / sinh k], by mpmath differentiation."""
    if n == 1:
        return V(k)
    if n == 2:
        return (k * V(k) + t * mp.diff(V, k)) / mp.sinh(k)
    raise ValueError(n)


def pc_raw(th, ph, t, n, K=3, U=30):
    """P_C from the raw k-series on the line Im w = ph; needs th > 0."""
    def f(u):
        k0 = kappa(th, ph, u)
        s = 0
        for k in range(-K, K + 1):
            kk = k0 + 2j * k * mp.pi
            s += mp.exp((kk * kk - u * u) / (2 * t)) * Vn(n, kk, t)
        return mp.re(s)
    I = 2 * mp.quad(f, mp.linspace(0, U, 61))
    return mp.e ** (n * n * t / 2) * (2 * mp.pi * t) ** (-(n + 1)) * I


def ps_spectral(gamma, t, n, M=200):
    x = mp.cos(gamma)
    s = 0
    for m in range(M):
        s += mp.e ** (-m * (m + 2 * n) * t / 2) * (m + n) / mp.mpf(n) * mp.gegenbauer(m, n, x)
    return s / (2 * mp.pi ** (n + 1) / mp.factorial(n))


def distance_by_shooting(th, ph, E0, tau0):
    """Solve for (E, tau) whose closed-form bicharacteristic hits (th, ph) at s = 1."""
    def F(E, tau):
        Om = mp.sqrt(E * E + tau * tau)
        s2 = (E / Om) ** 2 * mp.sin(Om) ** 2
        phase = mp.atan2(tau * mp.sin(Om), Om * mp.cos(Om))
        return [s2 - mp.sin(th) ** 2, phase - tau - ph]
    E, tau = mp.findroot(F, (mp.mpf(E0), mp.mpf(tau0)))
    return E, tau


def action_value(th, ph):
    """2 g(i psi) from the root psi of the critical-point equation."""
    def F(p):
        x = mp.cos(th) * mp.cos(p)
        return p - mp.acos(x) * mp.cos(th) * mp.sin(p) / mp.sqrt(1 - x * x) - ph
    psi = mp.findroot(F, (ph, mp.pi - mp.mpf("1e-20")), solver="bisect")
    eta = mp.acos(mp.cos(th) * mp.cos(psi))
    return eta ** 2 - (psi - ph) ** 2


def main():
    out = {}
    out["PC(0.6,0.9,0.8,n=1)"] = pc_raw(0.6, 0.9, 0.8, 1)
    out["PC(0.7,0.5,1.0,n=1)"] = pc_raw(0.7, 0.5, 1.0, 1)
    out["PC(0.7,0.5,1.0,n=2)"] = pc_raw(0.7, 0.5, 1.0, 2)
    out["PC(1.1,2.3,0.5,n=2)"] = pc_raw(1.1, 2.3, 0.5, 2)
    out["PS(1,1,n=1)"] = ps_spectral(1, 1, 1)
    out["PS(2,0.5,n=2)"] = ps_spectral(2, 0.5, 2)
    out["PS(0.3,0.25,n=3)"] = ps_spectral(0.3, 0.25, 3)
    E, tau = distance_by_shooting(0.5, 1.0, 1.8, 1.6)
    out["d_c(0.5,1.0)"] = E
    out["tau(0.5,1.0)"] = tau
    out["2g(0.5,1.0)"] = action_value(0.5, 1.0)
    out["2g(pi/4,pi/4)"] = action_value(mp.pi / 4, mp.pi / 4)
    k = mp.mpc(0.7, 0.4)
    out["V2(0.7+0.4i,0.3)"] = Vn(2, k, 0.3)
    out["W21(1)"] = mp.diff(lambda s: mp.log(V(s)), 1) / 1
    out["zonal area n=1"] = 2 * mp.pi ** 1.5 / mp.gamma(1.5) * mp.quad(lambda x: (1 - x * x) ** 0.5, [-1, 1])
    out["zonal area n=2"] = 2 * mp.pi ** 2.5 / mp.gamma(2.5) * mp.quad(lambda x: (1 - x * x) ** 1.5, [-1, 1])
    for name, v in out.items():
        print(f"{name:24s} {mp.nstr(v, 17)}")


if __name__ == "__main__":
    main()
