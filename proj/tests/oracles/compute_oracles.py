#!/usr/bin/env python3
"""High-precision reference values frozen into the C++ tests.

Everything here is evaluated with mpmath at 40 digits, independently of the
C++ implementation: expectations are computed by numerical quadrature over
the Gaussian increment, roots with mpmath.findroot, special functions with
mpmath's own routines. Re-run to regenerate the constants quoted in tests/.
"""
from mpmath import mp, mpf, ncdf, npdf, exp, sqrt, log, lambertw, pi, quad, inf, findroot, diff

mp.dps = 40
YEAR_SECONDS = mpf(31536000)
DT2 = mpf(2) / YEAR_SECONDS


def fee_ratio(g):
    return g / (1 - g)


def big_e(s, r, dt):
    return -mp.expm1(-(r + s * s / 4) * dt / 2)


def big_d(s, r, dt):
    return ncdf((r + s * s / 2) * sqrt(dt) / s) - exp(-r * dt) * ncdf((r - s * s / 2) * sqrt(dt) / s)


def gamma_star(s, r, dt):
    return 2 * big_e(s, r, dt) / (big_d(s, r, dt) - big_e(s, r, dt))


def block_fee(p0, p1):
    return p1 * max(1 / sqrt(p1) - 1 / sqrt(p0), 0) + max(sqrt(p1) - sqrt(p0), 0)


def token_value(p, s, r, dt, gh):
    gs = gamma_star(s, r, dt)
    return 2 * gh * sqrt(p) / gs if gh >= gs else 2 * sqrt(p)


def expected_fee_by_quadrature(p0, s, r, dt):
    """e^{-r dt} E[F(P0, P_dt)] by integrating over the normal increment."""
    def integrand(z):
        p1 = p0 * exp((r - s * s / 2) * dt + s * sqrt(dt) * z)
        return block_fee(p0, p1) * npdf(z)
    # kink of F sits at P1 = P0
    z0 = -(r - s * s / 2) * sqrt(dt) / s
    return exp(-r * dt) * quad(integrand, [-inf, z0, inf])


def interblock_by_quadrature(pt, p0, tau, s, r, dt, gh):
    """e^{-r tau} E[V0(P_dt) + gh F(P0, P_dt) | P_t] by quadrature."""
    def integrand(z):
        p1 = pt * exp((r - s * s / 2) * tau + s * sqrt(tau) * z)
        return (token_value(p1, s, r, dt, gh) + gh * block_fee(p0, p1)) * npdf(z)
    z0 = (log(p0 / pt) - (r - s * s / 2) * tau) / (s * sqrt(tau))
    return exp(-r * tau) * quad(integrand, [-inf, z0, inf])


def show(label, value):
    print(f"{label:60s} {mp.nstr(value, 20)}")


if __name__ == "__main__":
    for x in ["1", "-3", "5", "-8", "0.3", "-37"]:
        show(f"norm_cdf({x})", ncdf(mpf(x)))
    for x in ["-1e-9", "-0.2", "0.5", "10", "1000", "-0.3678"]:
        show(f"W0({x})", lambertw(mpf(x), 0).real)
    for x in ["-0.3", "-1e-3", "-1e-10"]:
        show(f"Wm1({x})", lambertw(mpf(x), -1).real)

    r = mpf("0.05")
    g5 = fee_ratio(mpf("5e-4"))
    show("gamma_star(0.3168)", gamma_star(mpf("0.3168"), r, DT2))
    show("gamma_star(1.5846)", gamma_star(mpf("1.5846"), r, DT2))
    show("gamma_star(0.4472)", gamma_star(mpf("0.4472"), r, DT2))
    show("token_value ex4.4 sigma=0.2582 P=1", token_value(1, mpf("0.2582"), r, DT2, g5))

    # block fee expectation: polygon params and a coarse-block regime
    show("Fbar0 polygon s=0.2582 P0=1 (quad)", expected_fee_by_quadrature(mpf(1), mpf("0.2582"), r, DT2))
    show("Fbar0 dt=0.1 s=0.3 P0=1 (quad)", expected_fee_by_quadrature(mpf(1), mpf("0.3"), r, mpf("0.1")))

    # inter-block value oracle in a coarse-block regime (gamma=30%, dt=0.1y)
    g30 = fee_ratio(mpf("0.3"))
    for (pt, p0, tau) in [("1.1", "1", "0.04"), ("0.8", "1.2", "0.1"), ("2", "2", "0.07")]:
        v = interblock_by_quadrature(mpf(pt), mpf(p0), mpf(tau), mpf("0.3"), r, mpf("0.1"), g30)
        show(f"interblock(Pt={pt},P0={p0},tau={tau}) gamma=30% dt=0.1 s=0.3", v)

    # calibration round trip: C from its expectation identity at sigma=0.30
    s = mpf("0.30")
    c30 = big_d(s, r, DT2) - big_e(s, r, DT2)
    show("C(sigma=0.30) polygon", c30)

    # tangency fee: gh = gamma_star(sigma_bar(gh))
    def sigma_bar(gh, rr, dt):
        return rr * sqrt(dt / (-lambertw(-(pi / 2) * ((2 + gh) * rr * dt / (2 * gh)) ** 2, 0).real))
    gh_t = findroot(lambda gh: gh - gamma_star(sigma_bar(gh, r, DT2), r, DT2), mpf("1.41e-4"))
    show("critical fee ratio", gh_t)
    show("critical fee bps", gh_t / (1 + gh_t) * 10000)

    # vega at the figure parameters (r = 0.05%)
    r3 = mpf("0.0005")
    for sv in ["0.005", "0.02", "0.1", "0.5", "2.0"]:
        show(f"vega fig3 P=1 sigma={sv}", diff(lambda x: token_value(1, x, r3, DT2, g5), mpf(sv)))
    vz = findroot(lambda x: diff(lambda y: token_value(1, y, r3, DT2, g5), x), (mpf("0.02"), mpf("0.1")), solver="anderson")
    show("vega zero crossing fig3", vz)
