"""Gauss-Legendre rules by Newton iteration on the node angles.

Nodes are kept as angles ``theta_i`` with ``x_i = cos(theta_i)``; quantities
such as ``1 - x_i**2`` are then formed as ``sin(theta_i)**2`` and do not
suffer cancellation next to the endpoints. Only the nonnegative half of the
rule is iterated; the other half is its mirror image, so the symmetry
``x_{n+1-i} = -x_i``, ``w_{n+1-i} = w_i`` holds bit for bit.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ._summation import csum
from .bessel import j0_zeros
from .errors import ComputationError, DomainError

__all__ = ["QuadratureRule", "legendre_eval", "compute_rule", "quadrature_apply"]

_EPS = np.finfo(np.float64).eps
_MAX_NEWTON = 20
#: Bessel-type initial guesses are used while ``kappa * theta`` stays below this.
BESSEL_GUESS_LIMIT = 40.0
MAX_DEGREE = 10**6


@dataclass(frozen=True)
class QuadratureRule:
    """An n-point Gauss-Legendre rule with ascending nodes.

    Arrays are read-only. ``thetas`` decrease with the index so that
    ``nodes = cos(thetas)`` increase.
    """

    n: int
    kappa: float
    thetas: NDArray[np.float64]
    nodes: NDArray[np.float64]
    weights: NDArray[np.float64]

    @property
    def sin_thetas(self) -> NDArray[np.float64]:
        """``sqrt(1 - x_i^2)`` without cancellation."""
        return np.sin(self.thetas)

    @property
    def one_minus_nodes(self) -> NDArray[np.float64]:
        """``1 - x_i`` evaluated as ``2 sin^2(theta_i / 2)``."""
        return 2.0 * np.sin(0.5 * self.thetas) ** 2

    @property
    def one_plus_nodes(self) -> NDArray[np.float64]:
        """``1 + x_i`` evaluated as ``2 cos^2(theta_i / 2)``."""
        return 2.0 * np.cos(0.5 * self.thetas) ** 2

    def __len__(self) -> int:
        return self.n


def _recurrence(n: int, x: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Return ``(P_n(x), P_{n-1}(x))`` by the three-term recurrence."""
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev, np.zeros_like(x)
    p = x.copy()
    for k in range(1, n):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return p, p_prev


def _recurrence_theta(n: int, theta: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Return ``(P_n, P_{n-1} - x P_n)`` at ``x = cos(theta)``.

    Runs the recurrence on the differences ``P_k - P_{k-1}`` with
    ``u = 1 - x = 2 sin^2(theta/2)`` so that small angles are resolved in
    theta rather than being rounded away in ``cos(theta)``.
    """
    u = 2.0 * np.sin(0.5 * theta) ** 2
    p = np.ones_like(theta)
    d = np.zeros_like(theta)
    for k in range(n):
        # (k+1)(P_{k+1} - P_k) = k (P_k - P_{k-1}) - (2k+1) u P_k
        d = (k * d - (2 * k + 1) * u * p) / (k + 1)
        p = p + d
    return p, u * p - d


def legendre_eval(n: int, x: ArrayLike) -> tuple[np.ndarray | float, np.ndarray | float]:
    """Legendre polynomial ``P_n`` and its derivative at ``x`` in ``[-1, 1]``.

    Accepts a scalar or an array; returns the same shape.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    xa = np.asarray(x, dtype=np.float64)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if not np.all(np.isfinite(xa)) or np.any(np.abs(xa) > 1.0):
        raise DomainError("Legendre argument must lie in [-1, 1]")
    p, p_prev = _recurrence(n, xa)
    dp = np.empty_like(xa)
    inner = np.abs(xa) < 1.0
    xi = xa[inner]
    dp[inner] = n * (xi * p[inner] - p_prev[inner]) / (xi * xi - 1.0)
    edge = ~inner
    # P_n'(+-1) = (+-1)^(n-1) n (n+1) / 2
    dp[edge] = np.sign(xa[edge]) ** (n - 1) * (n * (n + 1) / 2.0)
    if scalar:
        return float(p[0]), float(dp[0])
    return p, dp


def _initial_angles(n: int, idx: NDArray[np.int64]) -> NDArray[np.float64]:
    """Starting angles for the 1-based node indices ``idx`` (nonnegative half)."""
    kappa = n + 0.5
    alpha = (kappa + 0.25 - idx) * np.pi / kappa
    theta = alpha + 1.0 / (np.tan(alpha) * 8.0 * kappa * kappa)
    # Bessel-type guesses near x = 1, where the elementary correction fails
    k = n - idx + 1
    kmax = int(min(k.max(), math.ceil(BESSEL_GUESS_LIMIT / math.pi) + 1))
    zeros = j0_zeros(kmax).zeros
    near = k <= kmax
    jz = zeros[k[near] - 1]
    use = jz < BESSEL_GUESS_LIMIT
    beta = jz / kappa
    bessel_theta = beta - (1.0 - beta / np.tan(beta)) / (8.0 * kappa * kappa * beta)
    sel = np.flatnonzero(near)[use]
    theta[sel] = bessel_theta[use]
    return theta


def _newton_half(n: int, idx: NDArray[np.int64]) -> NDArray[np.float64]:
    theta = _initial_angles(n, idx)
    active = np.ones(theta.shape, dtype=bool)
    for _ in range(_MAX_NEWTON):
        t = theta[active]
        p, q = _recurrence_theta(n, t)
        # dP_n/dtheta = -n (P_{n-1} - x P_n) / sin(theta)
        step = p * np.sin(t) / (n * q)
        theta[active] = t + step
        done = np.abs(step) < 4.0 * _EPS
        active[np.flatnonzero(active)[done]] = False
        if not active.any():
            return theta
    bad = int(idx[np.flatnonzero(active)[0]])
    raise ComputationError(
        f"Newton iteration for node {bad} of the {n}-point rule did not converge",
        index=bad,
        module="legendre_rules",
    )


#: nodes below this are refined once more in ``x`` itself
_CENTRAL = 0.5


def _polish_central(n: int, theta: NDArray[np.float64]) -> NDArray[np.float64]:
    """``cos(theta)``, with one extended-precision Newton step in ``x`` for small nodes.

    Near ``theta = pi/2`` the angle carries an absolute error of about
    ``ulp(pi/2)``, which ``cos`` passes on unchanged to a node of size
    ``O(1/n)``. A Newton step in ``x`` brings that down to about ``eps / n``.
    """
    x = np.cos(theta)
    sel = x < _CENTRAL
    if sel.any():
        xc = x[sel].astype(np.longdouble)
        p, p_prev = _recurrence(n, xc)
        dp = n * (xc * p - p_prev) / (xc * xc - 1)
        x[sel] = (xc - p / dp).astype(np.float64)
    return x


def _weights(n: int, theta: NDArray[np.float64]) -> NDArray[np.float64]:
    # The rounding of theta is harmless here (d/dx (P_{n-1} - x P_n) = -(n+1) P_n
    # vanishes at a root), but recurrence rounding grows like sqrt(n) eps, so
    # this one pass runs in extended precision where the platform has it.
    t = theta.astype(np.longdouble)
    _, q = _recurrence_theta(n, t)
    s = np.sin(t)
    # w = 2 / ((1 - x^2) P_n'(x)^2) with P_n' = n (x P_n - P_{n-1}) / (x^2 - 1)
    return (2 * s * s / (n * n * q * q)).astype(np.float64)


@functools.lru_cache(maxsize=64)
def compute_rule(n: int) -> QuadratureRule:
    """The n-point Gauss-Legendre rule, ``1 <= n <= 10**6``.

    Cost is ``O(n^2)`` (three-term recurrence per node), so degrees beyond a
    few times ``10**4`` are slow. Results are cached.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"degree must be an integer, got {n!r}")
    n = int(n)
    if n < 1 or n > MAX_DEGREE:
        raise DomainError(f"degree must be in [1, {MAX_DEGREE}], got {n}")
    kappa = n + 0.5
    half = n // 2
    middle = n % 2 == 1

    # 1-based indices of the strictly positive nodes
    idx = np.arange(n - half + 1, n + 1, dtype=np.int64)
    theta_pos = _newton_half(n, idx) if half else np.empty(0)
    x_pos = _polish_central(n, theta_pos)
    theta_pos[x_pos < _CENTRAL] = np.arccos(x_pos[x_pos < _CENTRAL])
    w_pos = _weights(n, theta_pos) if half else np.empty(0)

    thetas = np.empty(n)
    nodes = np.empty(n)
    weights = np.empty(n)
    thetas[n - half:] = theta_pos
    nodes[n - half:] = x_pos
    weights[n - half:] = w_pos
    thetas[:half] = np.pi - theta_pos[::-1]
    nodes[:half] = -x_pos[::-1]
    weights[:half] = w_pos[::-1]
    if middle:
        c = half
        thetas[c] = 0.5 * np.pi
        nodes[c] = 0.0
        _, p_prev = _recurrence(n, np.zeros(1, dtype=np.longdouble))
        weights[c] = float(2 / (n * n * p_prev[0] ** 2))

    if not (np.all(np.isfinite(weights)) and np.all(weights > 0.0)):
        raise ComputationError(f"non-positive or non-finite weight in {n}-point rule", module="legendre_rules")
    for arr in (thetas, nodes, weights):
        arr.setflags(write=False)
    return QuadratureRule(n=n, kappa=kappa, thetas=thetas, nodes=nodes, weights=weights)


def quadrature_apply(rule: QuadratureRule, f: Callable) -> float:
    """``sum_i w_i f(x_i)`` with correctly rounded accumulation."""
    try:
        values = np.asarray(f(rule.nodes), dtype=np.float64)
        if values.shape != rule.nodes.shape:
            values = np.broadcast_to(values, rule.nodes.shape)
    except (TypeError, ValueError):
        values = np.array([f(float(x)) for x in rule.nodes], dtype=np.float64)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0]) + 1
        raise ComputationError(f"integrand is not finite at node {bad}", index=bad, module="legendre_rules")
    return csum((rule.weights * values).tolist())
