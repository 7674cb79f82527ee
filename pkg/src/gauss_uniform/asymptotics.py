"""Large-degree approximations of Gauss-Legendre nodes and weights.

Two families are provided. The elementary one,

    x_i ~ F(kappa) cos(alpha_i),  w_i ~ (pi/kappa) F(kappa) sin(alpha_i),
    alpha_i = (kappa + 1/4 - i) pi / kappa,  F(kappa) = 1 - 1/(8 kappa^2),

with errors O(kappa^-4) and O(kappa^-5), is only meaningful away from the
endpoints. The Bessel-type one,

    x_{n-i} ~ 1 - j_{i+1}^2 / (2 kappa^2),
    w_{n-i} ~ 2 / (kappa^2 J1(j_{i+1})^2) (1 - 1/(12 kappa^2) - j_{i+1}^2/(6 kappa^2)),

covers the few nodes closest to x = 1 (and, by symmetry, x = -1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bessel import j0_zeros
from .errors import DomainError
from .fitting import loglog_slope
from .legendre import compute_rule

__all__ = [
    "ElementaryApprox",
    "BesselApprox",
    "elementary_approx",
    "bessel_approx",
    "residual_scaling",
    "interior_index",
    "RESIDUAL_KINDS",
    "NOISE_FLOOR",
]

RESIDUAL_KINDS = ("elem_node", "elem_weight", "bessel_node", "bessel_weight")
#: Residuals below this are indistinguishable from rounding and are dropped from fits.
NOISE_FLOOR = 1e-15


def f_kappa(kappa: float) -> float:
    return 1.0 - 1.0 / (8.0 * kappa * kappa)


@dataclass(frozen=True)
class ElementaryApprox:
    n: int
    i: int
    alpha_angle: float
    delta: float
    f_kappa: float
    node_approx: float
    weight_approx: float
    valid: bool


@dataclass(frozen=True)
class BesselApprox:
    n: int
    i: int
    beta_angle: float
    node_endpoint_approx: float
    weight_endpoint_approx: float


def elementary_approx(n: int, i: int) -> ElementaryApprox:
    """Elementary approximation of node ``x_i`` and weight ``w_i`` (1-based ``i``).

    ``valid`` is False when ``|cot(alpha_i)| > kappa/2``, i.e. for the extreme
    nodes where the correction ``delta_i`` is no longer small.
    """
    if n < 1 or not 1 <= i <= n:
        raise DomainError(f"need 1 <= i <= n, got n={n}, i={i}")
    kappa = n + 0.5
    alpha = (kappa + 0.25 - i) * math.pi / kappa
    # cot(pi/2) and cos(pi/2) are exactly zero, not those of the rounded angle
    middle = 2 * i == n + 1
    cot = 0.0 if middle else math.cos(alpha) / math.sin(alpha)
    fk = f_kappa(kappa)
    return ElementaryApprox(
        n=n,
        i=i,
        alpha_angle=alpha,
        delta=cot / (8.0 * kappa * kappa),
        f_kappa=fk,
        node_approx=0.0 if middle else fk * math.cos(alpha),
        weight_approx=math.pi / kappa * fk * math.sin(alpha),
        valid=abs(cot) <= kappa / 2.0,
    )


def bessel_approx(n: int, i: int) -> BesselApprox:
    """Bessel-type approximation of ``x_{n-i}`` and ``w_{n-i}`` for small offsets ``i``.

    Raises :class:`DomainError` unless ``j_{i+1} < kappa/2``.
    """
    if n < 1 or not 0 <= i <= n - 1:
        raise DomainError(f"need 0 <= i <= n-1, got n={n}, i={i}")
    kappa = n + 0.5
    table = j0_zeros(i + 1)
    j = table.zero(i + 1)
    if not j < kappa / 2.0:
        raise DomainError(f"offset i={i} outside the endpoint region (j_{i + 1}={j:.6g} >= kappa/2)")
    jv = table.j1(i + 1)
    k2 = kappa * kappa
    return BesselApprox(
        n=n,
        i=i,
        beta_angle=j / kappa,
        node_endpoint_approx=1.0 - j * j / (2.0 * k2),
        weight_endpoint_approx=2.0 / (k2 * jv * jv) * (1.0 - 1.0 / (12.0 * k2) - j * j / (6.0 * k2)),
    )


def interior_index(n: int, fraction: float) -> int:
    """1-based node index at a fixed relative position ``fraction`` in ``(0, 1)``."""
    return min(n, max(1, int(round(fraction * n))))


def _residual(kind: str, n: int, fraction: float) -> float:
    rule = compute_rule(n)
    if kind in ("elem_node", "elem_weight"):
        i = interior_index(n, fraction)
        ea = elementary_approx(n, i)
        if kind == "elem_node":
            return abs(ea.node_approx - rule.nodes[i - 1])
        return abs(ea.weight_approx - rule.weights[i - 1])
    ba = bessel_approx(n, 0)
    if kind == "bessel_node":
        # both sides are 1 - O(kappa^-2); compare the complements
        return abs((1.0 - ba.node_endpoint_approx) - rule.one_minus_nodes[-1])
    return abs(ba.weight_endpoint_approx / rule.weights[-1] - 1.0)


def residual_scaling(kind: str, n_list: Sequence[int], fraction: float = 0.75) -> dict:
    """Fit ``log|residual|`` against ``log kappa`` over a sweep of degrees.

    Elementary kinds use the node at relative position ``fraction`` (0.75
    keeps ``x`` near 0.7 for every degree); Bessel kinds use the node nearest
    ``x = 1``. At ``fraction = 0.5`` the leading node error term is absent
    and the node residual decays one order faster. The weight residual of ``bessel_weight`` is relative.
    Points below :data:`NOISE_FLOOR` are excluded and listed in ``flagged``.
    """
    if kind not in RESIDUAL_KINDS:
        raise DomainError(f"unknown residual kind {kind!r}")
    ns = [int(n) for n in n_list]
    if len(ns) < 3 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("need at least three strictly increasing degrees")
    rows = []
    flagged = []
    for n in ns:
        r = _residual(kind, n, fraction)
        rows.append((n, n + 0.5, r))
        if r < NOISE_FLOOR:
            flagged.append(n)
    kept = [(k, r) for n, k, r in rows if n not in flagged]
    slope = loglog_slope([k for k, _ in kept], [r for _, r in kept])
    return {"kind": kind, "fraction": fraction, "rows": rows, "slope": slope, "flagged": flagged}
