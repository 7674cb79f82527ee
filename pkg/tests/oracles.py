"""Reference computations that share no code with the package.

Everything here runs in mpmath at elevated precision or uses closed forms.
"""
from __future__ import annotations

import functools
import math

import mpmath
import numpy as np

DPS = 40


def mp(x):
    return mpmath.mpf(x)


def j0(x):
    with mpmath.workdps(DPS):
        return mpmath.besselj(0, x)


def j1(x):
    with mpmath.workdps(DPS):
        return mpmath.besselj(1, x)


@functools.lru_cache(maxsize=None)
def j0_zero(k: int):
    with mpmath.workdps(DPS):
        return +mpmath.besseljzero(0, k)


def j0_series(x, terms: int = 200):
    """Power series of J0 summed directly in mpmath (enough terms for x < 40)."""
    with mpmath.workdps(80):
        x = mpmath.mpf(x)
        q = -(x * x) / 4
        term = mpmath.mpf(1)
        total = term
        for k in range(1, terms):
            term = term * q / (k * k)
            total += term
        return total


def bisect_j0_zero(k: int):
    """k-th zero of J0 by bisection on the series, from a bracket around (k - 1/4) pi."""
    with mpmath.workdps(50):
        a = mpmath.mpf(k - 0.75) * mpmath.pi
        b = mpmath.mpf(k - 0.25) * mpmath.pi + mpmath.mpf("0.1")
        fa = j0_series(a)
        for _ in range(120):
            m = (a + b) / 2
            fm = j0_series(m)
            if (fm < 0) == (fa < 0):
                a, fa = m, fm
            else:
                b = m
        return (a + b) / 2


def legendre_mp(n: int, x):
    """``(P_n, P_{n-1})`` by the three-term recurrence in mpmath."""
    p_prev, p = mpmath.mpf(1), mpmath.mpf(x)
    if n == 0:
        return p_prev, mpmath.mpf(0)
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return p, p_prev


def bisect_legendre_roots(n: int, pieces: int = 10_000):
    """Roots of P_n from sign changes on a uniform grid, refined by mpmath bisection."""
    grid = np.linspace(-1.0, 1.0, pieces + 1)
    vals = np.polynomial.legendre.legval(grid, [0] * n + [1])
    roots = []
    with mpmath.workdps(30):
        for k in range(pieces):
            if vals[k] == 0.0:
                roots.append(mpmath.mpf(grid[k]))
                continue
            if vals[k + 1] == 0.0 or vals[k] * vals[k + 1] > 0:
                continue
            a, b = mpmath.mpf(grid[k]), mpmath.mpf(grid[k + 1])
            fa = legendre_mp(n, a)[0]
            for _ in range(90):
                m = (a + b) / 2
                fm = legendre_mp(n, m)[0]
                if (fm < 0) == (fa < 0):
                    a, fa = m, fm
                else:
                    b = m
            roots.append((a + b) / 2)
    return roots


def gauss_node_weight(n: int, theta_guess: float):
    """Node and weight of the n-point rule nearest ``cos(theta_guess)``, via mpmath Newton."""
    with mpmath.workdps(DPS):
        x = mpmath.cos(mpmath.mpf(theta_guess))
        for _ in range(8):
            p, q = legendre_mp(n, x)
            dp = n * (x * p - q) / (x * x - 1)
            x -= p / dp
        p, q = legendre_mp(n, x)
        dp = n * (x * p - q) / (x * x - 1)
        w = 2 / ((1 - x * x) * dp * dp)
        return x, w


def closed_form_rules():
    """Nodes and weights of the 1- to 4-point rules in closed form."""
    s = math.sqrt
    r4a = s(3 / 7 - 2 / 7 * s(6 / 5))
    r4b = s(3 / 7 + 2 / 7 * s(6 / 5))
    wa = (18 + s(30)) / 36
    wb = (18 - s(30)) / 36
    return {
        1: ([0.0], [2.0]),
        2: ([-1 / s(3), 1 / s(3)], [1.0, 1.0]),
        3: ([-s(3 / 5), 0.0, s(3 / 5)], [5 / 9, 8 / 9, 5 / 9]),
        4: ([-r4b, -r4a, r4a, r4b], [wb, wa, wa, wb]),
    }


# named constant sequences straight from their definitions
def seq_a(i):
    with mpmath.workdps(DPS):
        j = j0_zero(i + 1)
        return 1 - 2 / (mpmath.pi * j * j1(j) ** 2)


def seq_b(i):
    with mpmath.workdps(DPS):
        ja, jb = j0_zero(i + 1), j0_zero(i + 2)
        return 2 / (jb**2 - ja**2) * (j1(jb) ** -2 + j1(ja) ** -2) - 1


def seq_c(i):
    with mpmath.workdps(DPS):
        return j1(j0_zero(i + 1)) ** 2 * (j0_zero(i + 2) ** 2 - j0_zero(i) ** 2) / 8 - 1


def seq_k(i):
    with mpmath.workdps(DPS):
        j = j0_zero(i + 1)
        return j**2 * (1 - 4 / (mpmath.pi**2 * j**2 * j1(j) ** 4))


def seq_C(i):
    with mpmath.workdps(DPS):
        t = lambda k: j1(j0_zero(k)) ** -2
        return 2 * mpmath.fsum(t(k + 1) for k in range(i)) + t(i + 1) - j0_zero(i + 1) ** 2 / 2


def seq_D(i):
    with mpmath.workdps(DPS):
        return mpmath.pi**2 * j1(j0_zero(i + 1)) ** 2 / 12


def seq_E(i):
    with mpmath.workdps(DPS):
        t = lambda k: j1(j0_zero(k)) ** -2
        return 2 * mpmath.fsum(t(k) for k in range(1, i + 1)) - j0_zero(i) ** 2 / 4 - j0_zero(i + 1) ** 2 / 4


def seq_K(i):
    with mpmath.workdps(DPS):
        t = lambda k: j1(j0_zero(k)) ** -2
        s1 = mpmath.fsum(t(k) for k in range(1, i + 1))
        s2 = mpmath.fsum(j0_zero(k) ** 2 * t(k) for k in range(1, i + 1))
        return s1 - s2 / (2 * s1)


SEQUENCES = {"a": seq_a, "b": seq_b, "c": seq_c, "k": seq_k, "C": seq_C, "D": seq_D, "E": seq_E, "K": seq_K}


def relation_raws_mp(n: int, thetas):
    """Raw values of every relation from mpmath nodes and weights (1-based keys)."""
    with mpmath.workdps(DPS):
        kappa = mpmath.mpf(n) + mpmath.mpf(1) / 2
        xw = [gauss_node_weight(n, float(t)) for t in thetas]
        x = [a for a, _ in xw]
        w = [b for _, b in xw]
        zbar = [mpmath.mpf(-1)]
        for wi in w:
            zbar.append(zbar[-1] + wi)
        z = [(zbar[i] + zbar[i + 1]) / 2 for i in range(n)]
        xbar = [(x[i] + x[i + 1]) / 2 for i in range(n - 1)]
        m = [2 * mpmath.fsum(x[j] * w[j] for j in range(i, n)) for i in range(n + 1)]
        out = {
            "circle1": {i + 1: kappa * w[i] / (mpmath.pi * mpmath.sqrt(1 - x[i] ** 2)) for i in range(n)},
            "trapezoid2": {i + 1: 2 * (x[i + 1] - x[i]) / (w[i] + w[i + 1]) for i in range(n - 1)},
            "trapezoid3": {i + 1: (x[i + 1] - x[i - 1]) / (2 * w[i]) for i in range(1, n - 1)},
            "uniform_circle": {i + 1: 1 - x[i] ** 2 - (kappa * w[i] / mpmath.pi) ** 2 for i in range(n)},
            "secondary_ratio": {i + 1: x[i] / z[i] - 1 for i in range(n) if abs(z[i]) > mpmath.mpf("1e-30")},
            "intermediate_ratio": {
                i: 1 - xbar[i - 1] / zbar[i] for i in range(1, n) if abs(zbar[i]) > mpmath.mpf("1e-30")
            },
            "partial_moment": {i: m[i] / (1 - zbar[i] ** 2) - 1 for i in range(1, n)},
        }
        return out, kappa
