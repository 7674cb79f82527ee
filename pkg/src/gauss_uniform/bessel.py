"""Bessel functions J0 and J1, the positive zeros of J0, and checks on them.

Small arguments use the power series summed in 40-digit decimal arithmetic
(the alternating series cancels badly in binary64 once x exceeds a few
units); large arguments use the Hankel asymptotic expansion truncated at its
smallest term.

The same two expansions evaluated entirely in decimal arithmetic give a
second, extended-precision zero table (:func:`j0_zeros_precise`). Sequences
built from differences of squared zeros need it: ``j_k^2/2`` is ~2e5 at
``k = 200``, so binary64 data carry an absolute noise of ~1e-11 there.
"""
from __future__ import annotations

import decimal
import math
import threading
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ._summation import csum
from .errors import ComputationError, DomainError, VerificationFailure

__all__ = [
    "BesselZeroTable",
    "bessel_j0",
    "bessel_j1",
    "j0_zeros",
    "mcmahon_guess",
    "sonin_check",
    "sk_decay",
    "j0_zeros_precise",
    "SERIES_CUTOFF",
]

#: Below this argument the decimal power series is used.
SERIES_CUTOFF = 20.0

_CTX = decimal.Context(prec=40)
_STOP = decimal.Decimal("1e-42")
_SQRT_HALF = math.sqrt(0.5)
_MAX_NEWTON = 50


def _check_arg(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"Bessel argument must be finite, got {x!r}")
    if x < 0.0:
        raise DomainError(f"Bessel argument must be >= 0, got {x!r}")
    return x


def _series_dec(xd: decimal.Decimal, order: int, ctx: decimal.Context, stop: decimal.Decimal) -> decimal.Decimal:
    # sum_k (-x^2/4)^k / (k! (k+order)!), times (x/2)^order
    with decimal.localcontext(ctx):
        q = xd * xd / 4
        term = xd / 2 if order == 1 else decimal.Decimal(1)
        total = term
        k = 0
        while True:
            k += 1
            term = -term * q / (k * (k + order))
            total += term
            if abs(term) < stop and k > 2:
                return total


def _series(x: float, order: int) -> float:
    return float(_series_dec(decimal.Decimal(x), order, _CTX, _STOP))


def _hankel_pq(x: float, nu: int) -> tuple[float, float]:
    """Asymptotic P and Q factors, summed up to the smallest term."""
    mu = 4.0 * nu * nu
    p_terms = [1.0]
    q_terms = []
    term = 1.0
    prev = math.inf
    k = 0
    while k < 80:
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = abs(term)
        if mag >= prev or mag < 1e-18:
            break
        prev = mag
        # a_k / x^k with sign (-1)^{floor(k/2)}
        signed = term if (k // 2) % 2 == 0 else -term
        if k % 2 == 0:
            p_terms.append(signed)
        else:
            q_terms.append(signed)
    return csum(p_terms), csum(q_terms)


def _asymptotic(x: float, nu: int) -> float:
    p, q = _hankel_pq(x, nu)
    c, s = math.cos(x), math.sin(x)
    if nu == 0:
        # chi = x - pi/4
        cos_chi = (c + s) * _SQRT_HALF
        sin_chi = (s - c) * _SQRT_HALF
    else:
        # chi = x - 3 pi/4
        cos_chi = (s - c) * _SQRT_HALF
        sin_chi = -(s + c) * _SQRT_HALF
    return math.sqrt(2.0 / (math.pi * x)) * (p * cos_chi - q * sin_chi)


def bessel_j0(x: float) -> float:
    """Bessel function of the first kind of order zero, for real ``x >= 0``."""
    x = _check_arg(x)
    if x < SERIES_CUTOFF:
        return _series(x, 0)
    return _asymptotic(x, 0)


def bessel_j1(x: float) -> float:
    """Bessel function of the first kind of order one, for real ``x >= 0``."""
    x = _check_arg(x)
    if x < SERIES_CUTOFF:
        return _series(x, 1)
    return _asymptotic(x, 1)


def mcmahon_guess(k: int) -> float:
    """Two-term McMahon estimate of the k-th positive zero of J0."""
    a = (k - 0.25) * math.pi
    return a + 1.0 / (8.0 * a)


def _refine_zero(k: int) -> float:
    x = mcmahon_guess(k)
    for _ in range(_MAX_NEWTON):
        f = bessel_j0(x)
        # J0' = -J1
        dx = f / bessel_j1(x)
        x += dx
        if abs(dx) < 1e-15 * x and abs(bessel_j0(x)) < 1e-13:
            return x
    raise ComputationError(
        f"Newton iteration for zero j_{k} of J0 did not converge in {_MAX_NEWTON} steps",
        index=k,
        module="bessel",
    )


@dataclass(frozen=True)
class BesselZeroTable:
    """First ``count`` positive zeros of J0 together with J1 at each zero."""

    count: int
    zeros: NDArray[np.float64]
    j1_values: NDArray[np.float64]

    def zero(self, k: int) -> float:
        """The k-th zero, 1-based as in ``j_1 < j_2 < ...``."""
        return float(self.zeros[k - 1])

    def j1(self, k: int) -> float:
        return float(self.j1_values[k - 1])


_ZEROS: list[float] = []
_J1_AT_ZEROS: list[float] = []
_LOCK = threading.Lock()


def j0_zeros(count: int) -> BesselZeroTable:
    """Zeros ``j_1..j_count`` of J0 from McMahon guesses refined by Newton.

    Zeros are computed once and kept in a process-wide list that grows on
    demand; every returned table holds read-only copies.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    count = int(count)
    with _LOCK:
        for k in range(len(_ZEROS) + 1, count + 1):
            z = _refine_zero(k)
            _ZEROS.append(z)
            _J1_AT_ZEROS.append(bessel_j1(z))
        zeros = np.array(_ZEROS[:count])
        j1v = np.array(_J1_AT_ZEROS[:count])
    zeros.setflags(write=False)
    j1v.setflags(write=False)
    return BesselZeroTable(count=count, zeros=zeros, j1_values=j1v)


def sonin_check(nu: float, count: int) -> list[float]:
    """Values ``c_i * y'(c_i)**2`` at the first ``count`` positive zeros.

    For ``nu = 0`` (``y = J0``, ``y' = -J1``) the sequence must be strictly
    decreasing; for ``nu = 1/2`` (``y = sqrt(2/(pi x)) sin x``, zeros ``k pi``)
    it must be constant. A violation raises :class:`VerificationFailure`.
    """
    if count < 3:
        raise DomainError(f"count must be >= 3, got {count}")
    if nu == 0:
        table = j0_zeros(count)
        vals = [float(c * v * v) for c, v in zip(table.zeros, table.j1_values)]
        for i in range(1, count):
            if not vals[i] < vals[i - 1]:
                raise VerificationFailure(
                    f"c J1(c)^2 not strictly decreasing at zero index {i + 1}", index=i + 1
                )
        return vals
    if nu == 0.5:
        vals = []
        for k in range(1, count + 1):
            c = k * math.pi
            # derivative of sqrt(2/(pi x)) sin x at a zero of sin
            d = math.sqrt(2.0 / (math.pi * c)) * math.cos(c)
            vals.append(c * d * d)
        ref = vals[0]
        for i, v in enumerate(vals):
            if abs(v - ref) > 1e-13:
                raise VerificationFailure(
                    f"order-1/2 sequence not constant at zero index {i + 1}", index=i + 1
                )
        return vals
    raise DomainError(f"nu must be 0 or 1/2, got {nu!r}")


def sk_decay(count: int) -> dict:
    """Increments ``s_k = C_k - C_{k-1}`` of the extreme-node constant sequence.

    ``s_k = J1(j_{k+1})^-2 + J1(j_k)^-2 - (j_{k+1}^2 - j_k^2)/2`` for
    ``k = 1..count``, evaluated from the extended-precision zero table. Returns the rows ``(k, s_k, k^2 s_k)`` and the supremum
    of ``k^2 |s_k|`` over ``k >= 10``.
    """
    if count < 10:
        raise DomainError(f"count must be >= 10, got {count}")
    zeros, j1v = j0_zeros_precise(count + 1)
    rows = []
    with decimal.localcontext(_HP):
        for k in range(1, count + 1):
            a, b = zeros[k - 1], zeros[k]
            s = 1 / (j1v[k] ** 2) + 1 / (j1v[k - 1] ** 2) - (b - a) * (b + a) / 2
            rows.append((k, float(s), float(k * k * s)))
    tail_sup = max(abs(r[2]) for r in rows if r[0] >= 10)
    return {"rows": rows, "tail_sup": tail_sup}


# ---------------------------------------------------------------------------
# extended precision (about 40 significant digits)

_D = decimal.Decimal
_HP = decimal.Context(prec=50)
_HP_SERIES = decimal.Context(prec=90)
_HP_STOP = _D("1e-60")
#: below this the extended-precision path uses the power series
HP_SERIES_CUTOFF = 40.0
_PI = _D("3.14159265358979323846264338327950288419716939937510582097494459")


def _cos_sin_dec(x: decimal.Decimal) -> tuple[decimal.Decimal, decimal.Decimal]:
    with decimal.localcontext(_HP):
        two_pi = 2 * _PI
        r = x - two_pi * int(x / two_pi)
        if r > _PI:
            r -= two_pi
        r2 = r * r
        c = term_c = _D(1)
        s = term_s = r
        k = 0
        while abs(term_c) > _HP_STOP or abs(term_s) > _HP_STOP:
            k += 1
            term_c = -term_c * r2 / ((2 * k - 1) * (2 * k))
            term_s = -term_s * r2 / ((2 * k) * (2 * k + 1))
            c += term_c
            s += term_s
        return +c, +s


def _hankel_dec(x: decimal.Decimal, nu: int) -> decimal.Decimal:
    with decimal.localcontext(_HP):
        mu = 4 * nu * nu
        p, q = _D(1), _D(0)
        term = _D(1)
        prev = None
        k = 0
        while True:
            k += 1
            term = term * (mu - (2 * k - 1) ** 2) / (k * 8 * x)
            mag = abs(term)
            if (prev is not None and mag >= prev) or mag < _HP_STOP:
                break
            prev = mag
            signed = term if (k // 2) % 2 == 0 else -term
            if k % 2 == 0:
                p += signed
            else:
                q += signed
        c, s = _cos_sin_dec(x)
        half = _D(2).sqrt() / 2
        if nu == 0:
            cos_chi, sin_chi = (c + s) * half, (s - c) * half
        else:
            cos_chi, sin_chi = (s - c) * half, -(s + c) * half
        return (2 / (_PI * x)).sqrt() * (p * cos_chi - q * sin_chi)


def _bessel_dec(x: decimal.Decimal, nu: int) -> decimal.Decimal:
    if x < HP_SERIES_CUTOFF:
        return _series_dec(x, nu, _HP_SERIES, _HP_STOP)
    return _hankel_dec(x, nu)


_ZEROS_HP: list[decimal.Decimal] = []
_J1_HP: list[decimal.Decimal] = []


def j0_zeros_precise(count: int) -> tuple[tuple[decimal.Decimal, ...], tuple[decimal.Decimal, ...]]:
    """Zeros of J0 and J1 at them as :class:`decimal.Decimal`, about 40 digits.

    Newton refinement of the binary64 zeros with both Bessel functions
    evaluated in decimal arithmetic. Cached process-wide like :func:`j0_zeros`.
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    count = int(count)
    start = j0_zeros(count).zeros.tolist()
    tol = _D("1e-40")
    with _LOCK:
        for k in range(len(_ZEROS_HP) + 1, count + 1):
            x = _D(start[k - 1])
            for _ in range(_MAX_NEWTON):
                with decimal.localcontext(_HP):
                    j1 = _bessel_dec(x, 1)
                    dx = _bessel_dec(x, 0) / j1
                    x += dx
                if abs(dx) < tol * x:
                    break
            else:
                raise ComputationError(
                    f"extended-precision refinement of j_{k} did not converge", index=k, module="bessel"
                )
            _ZEROS_HP.append(x)
            _J1_HP.append(_bessel_dec(x, 1))
        return tuple(_ZEROS_HP[:count]), tuple(_J1_HP[:count])
