"""Per-node asymptotic relations of Gauss-Legendre rules and Bessel-type constants.

Every check returns a :class:`RelationReport` with one row per admissible
index. Scaled deviations are always ``kappa**2 * deviation`` with
``kappa = n + 1/2``. Two kinds of relation are covered:

* proven asymptotic relations (``circle1``, ``trapezoid2``, ``trapezoid3``):
  the row's ``bound`` is the predicted limit of the scaled value and
  ``within_bound`` compares against it with a tolerance;
* conjectured strict bounds (``uniform_circle``, ``secondary_ratio``,
  ``intermediate_ratio``, ``partial_moment``): ``bound`` is the upper bound on
  the raw deviation and ``within_bound`` means ``0 < raw < bound``.

A failed conjectured bound is data, not an exception: small rules are known
to exceed some of these bounds.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from ._summation import tail_sums
from .bessel import j0_zeros_precise
from .errors import DomainError
from .fitting import richardson_kappa2
from .legendre import QuadratureRule, compute_rule
from .nodes import NodeSystem, build_node_system

__all__ = [
    "RelationRow",
    "RelationReport",
    "SequenceTable",
    "RELATION_IDS",
    "SEQUENCE_NAMES",
    "circle_theorem_residuals",
    "trapezoid_residuals",
    "uniform_circle_check",
    "secondary_ratio_check",
    "intermediate_ratio_check",
    "partial_moment_check",
    "run_relation",
    "sequence",
    "scaled_constant_fit",
    "bound_threshold",
]

RELATION_IDS = (
    "circle1",
    "trapezoid2",
    "trapezoid3",
    "uniform_circle",
    "secondary_ratio",
    "intermediate_ratio",
    "partial_moment",
)
CONJECTURE_IDS = ("uniform_circle", "secondary_ratio", "intermediate_ratio", "partial_moment")
SEQUENCE_NAMES = ("a", "b", "c", "k", "C", "D", "E", "K")

PI2_12 = math.pi**2 / 12.0
PI2_6 = math.pi**2 / 6.0
_D0 = decimal.Decimal(0)
_DPI = decimal.Decimal("3.14159265358979323846264338327950288419716939937510582097494459")
#: default tolerance on ``|scaled - predicted|`` for the proven relations
THEOREM_TOL = 1e-2


class RelationRow(NamedTuple):
    i: int
    raw: float
    scaled: float
    bound: float
    within_bound: bool


@dataclass(frozen=True)
class RelationReport:
    relation_id: str
    n: int
    per_index: list[RelationRow]
    #: ``{"max": (value, i), "min": (value, i)}`` over the scaled values
    extremal_scaled: dict
    #: relation-specific extra results (e.g. half-moment constants)
    extras: dict = field(default_factory=dict)

    @property
    def all_within(self) -> bool:
        return all(r.within_bound for r in self.per_index)

    @property
    def violations(self) -> list[int]:
        return [r.i for r in self.per_index if not r.within_bound]

    def row(self, i: int) -> RelationRow:
        for r in self.per_index:
            if r.i == i:
                return r
        raise KeyError(i)


def _report(relation_id: str, n: int, idx, raw, scaled, bound, ok, extras=None) -> RelationReport:
    rows = [
        RelationRow(int(i), float(r), float(s), float(b), bool(o))
        for i, r, s, b, o in zip(idx, raw, scaled, bound, ok)
    ]
    if rows:
        hi = max(rows, key=lambda r: r.scaled)
        lo = min(rows, key=lambda r: r.scaled)
        ext = {"max": (hi.scaled, hi.i), "min": (lo.scaled, lo.i)}
    else:
        ext = {}
    return RelationReport(relation_id, n, rows, ext, extras or {})


def _node_gaps(rule: QuadratureRule) -> np.ndarray:
    """``x_{i+1} - x_i`` from the angles, free of endpoint cancellation."""
    t = rule.thetas
    return 2.0 * np.sin(0.5 * (t[:-1] - t[1:])) * np.sin(0.5 * (t[:-1] + t[1:]))


def _band_mask(rule: QuadratureRule, band) -> np.ndarray:
    a, b = float(band[0]), float(band[1])
    if not (-1.0 < a < b < 1.0):
        raise DomainError(f"band must satisfy -1 < a < b < 1, got {band!r}")
    return (rule.nodes >= a) & (rule.nodes <= b)


def circle_theorem_residuals(
    rule: QuadratureRule,
    band: Sequence[float] | None = (-0.9, 0.9),
    tol: float = THEOREM_TOL,
) -> RelationReport:
    """``kappa w_i / (pi sin theta_i)`` against ``1 - 1/(8 kappa^2 sin^2 alpha_i)``.

    Only nodes with ``x_i`` in ``band`` are reported; ``band=None`` reports
    every node (diagnostic mode, e.g. to look at the extreme node).
    """
    n, kappa = rule.n, rule.kappa
    idx = np.arange(1, n + 1)
    keep = np.ones(n, dtype=bool) if band is None else _band_mask(rule, band)
    if not keep.any():
        raise DomainError(f"no node of the {n}-point rule lies in the band {band!r}")
    raw = kappa * rule.weights / (math.pi * rule.sin_thetas)
    scaled = kappa * kappa * (raw - 1.0)
    alpha = (kappa + 0.25 - idx) * math.pi / kappa
    predicted = -1.0 / (8.0 * np.sin(alpha) ** 2)
    ok = np.abs(scaled - predicted) <= tol
    return _report("circle1", n, idx[keep], raw[keep], scaled[keep], predicted[keep], ok[keep])


def trapezoid_residuals(
    rule: QuadratureRule,
    which: int,
    band: Sequence[float] | None = None,
    tol: float = THEOREM_TOL,
) -> RelationReport:
    """Node gaps against weight averages.

    ``which=2``: ``raw_i = 2 (x_{i+1} - x_i) / (w_i + w_{i+1})``, ``i = 1..n-1``,
    scaled limit ``pi^2/12``. ``which=3``: ``raw_i = (x_{i+1} - x_{i-1}) / (2 w_i)``,
    ``i = 2..n-1``, scaled limit ``-pi^2/6``. With a ``band`` only indices whose
    outer nodes both lie in it are kept; the tolerance check is only
    meaningful there.
    """
    n, kappa = rule.n, rule.kappa
    w = rule.weights
    gaps = _node_gaps(rule)
    if which == 2:
        if n < 2:
            raise DomainError("trapezoid2 needs n >= 2")
        idx = np.arange(1, n)
        raw = 2.0 * gaps / (w[:-1] + w[1:])
        predicted = np.full(idx.size, PI2_12)
        outer = (idx - 1, idx)
    elif which == 3:
        if n < 3:
            raise DomainError("trapezoid3 needs n >= 3")
        idx = np.arange(2, n)
        raw = (gaps[:-1] + gaps[1:]) / (2.0 * w[1:-1])
        predicted = np.full(idx.size, -PI2_6)
        outer = (idx - 2, idx)
    else:
        raise DomainError(f"which must be 2 or 3, got {which!r}")
    keep = np.ones(idx.size, dtype=bool)
    if band is not None:
        inside = _band_mask(rule, band)
        keep = inside[outer[0]] & inside[outer[1]]
    scaled = kappa * kappa * (raw - 1.0)
    ok = np.abs(scaled - predicted) <= tol
    return _report(f"trapezoid{which}", n, idx[keep], raw[keep], scaled[keep], predicted[keep], ok[keep])


def uniform_circle_check(rule: QuadratureRule) -> RelationReport:
    """``1 - (x_i^2 + y_i^2)`` with ``y_i = kappa w_i / pi`` against ``1/(4 kappa^2)``."""
    n, kappa = rule.n, rule.kappa
    s = rule.sin_thetas
    y = kappa * rule.weights / math.pi
    raw = (s - y) * (s + y)
    # sin(pi - theta) is not bit-symmetric; reflect the upper half
    half = n // 2
    raw[:half] = raw[::-1][:half]
    bound = 1.0 / (4.0 * kappa * kappa)
    ok = (raw > 0.0) & (raw < bound)
    idx = np.arange(1, n + 1)
    return _report("uniform_circle", n, idx, raw, kappa * kappa * raw, np.full(n, bound), ok)


def _mirror_sym(raw_pos: np.ndarray, pos_idx: np.ndarray, n_pts: int) -> np.ndarray:
    out = np.full(n_pts, np.nan)
    out[pos_idx] = raw_pos
    out[n_pts - 1 - pos_idx] = raw_pos
    return out


def secondary_ratio_check(rule: QuadratureRule, sys: NodeSystem | None = None) -> RelationReport:
    """``x_i / z_i - 1`` against ``pi^2 / (12 kappa^2)``; ``z_i = 0`` is skipped."""
    sys = build_node_system(rule) if sys is None else sys
    n, kappa = rule.n, rule.kappa
    x, z = rule.nodes, sys.z
    pos = np.flatnonzero(x > 0.0)
    xp, zp = x[pos], z[pos]
    # near x = 1, x - z = (1 - z) - (1 - x) in complements
    far = xp > 0.5
    diff = np.where(far, sys.one_minus_z[pos] - rule.one_minus_nodes[pos], xp - zp)
    raw = _mirror_sym(diff / zp, pos, n)
    idx = np.flatnonzero(np.isfinite(raw))
    raw = raw[idx]
    bound = PI2_12 / (kappa * kappa)
    ok = (raw > 0.0) & (raw < bound)
    return _report("secondary_ratio", n, idx + 1, raw, kappa * kappa * raw, np.full(idx.size, bound), ok)


def intermediate_ratio_check(rule: QuadratureRule, sys: NodeSystem | None = None) -> RelationReport:
    """``1 - xbar_i / zbar_i`` (``i = 1..n-1``) against ``pi^2 / (6 kappa^2)``.

    The scaled value is ``kappa^2 (xbar_i / zbar_i - 1)``, i.e. ``-kappa^2 raw``.
    Indices with ``zbar_i = 0`` are skipped.
    """
    sys = build_node_system(rule) if sys is None else sys
    n, kappa = rule.n, rule.kappa
    if n < 2:
        raise DomainError("intermediate ratios need n >= 2")
    xb = sys.xbar
    zb = sys.zbar[1:n]
    pos = np.flatnonzero(zb > 0.0)
    far = xb[pos] > 0.5
    diff = np.where(
        far, sys.one_minus_xbar[pos] - sys.one_minus_zbar[1:n][pos], zb[pos] - xb[pos]
    )
    raw = _mirror_sym(diff / zb[pos], pos, n - 1)
    idx = np.flatnonzero(np.isfinite(raw))
    raw = raw[idx]
    bound = PI2_6 / (kappa * kappa)
    ok = (raw > 0.0) & (raw < bound)
    return _report("intermediate_ratio", n, idx + 1, raw, -kappa * kappa * raw, np.full(idx.size, bound), ok)


def partial_moment_check(rule: QuadratureRule, sys: NodeSystem | None = None) -> RelationReport:
    """``m_i / ((1 - zbar_i)(1 + zbar_i)) - 1`` (``i = 1..n-1``) against ``pi^2/(12 kappa^2)``.

    On the upper half the numerator ``m_i - D(zbar_i)`` is formed as
    ``T_i^2 - 2 U_i`` with ``T_i = sum_{j>i} w_j`` and
    ``U_i = sum_{j>i} (1 - x_j) w_j``, which avoids subtracting two numbers
    close to ``D``. ``extras["half_moment"]`` holds ``kappa^2 (m_c - 1)`` at
    the central index ``c`` (``n/2`` or ``(n+1)/2``) with its limit.
    """
    sys = build_node_system(rule) if sys is None else sys
    n, kappa = rule.n, rule.kappa
    if n < 2:
        raise DomainError("partial moments need n >= 2")
    k2 = kappa * kappa
    w = rule.weights
    T = sys.one_minus_zbar
    U = tail_sums(np.concatenate(([0.0], rule.one_minus_nodes * w)))
    upper = np.arange((n + 1) // 2, n)
    num = T[upper] ** 2 - 2.0 * U[upper]
    raw_up = num / sys.d_zbar[upper]
    raw = np.empty(n + 1)
    raw[upper] = raw_up
    raw[n - upper] = raw_up
    idx = np.arange(1, n)
    raw = raw[idx]
    bound = PI2_12 / k2
    ok = (raw > 0.0) & (raw < bound)
    if n % 2 == 0:
        c = n // 2
        half = {"index": c, "scaled": float(k2 * (sys.pm[c] - 1.0)), "target": PI2_12}
    else:
        c = (n + 1) // 2
        half = {"index": c, "scaled": float(k2 * (sys.pm[c] - 1.0)), "target": -PI2_6}
    return _report(
        "partial_moment", n, idx, raw, k2 * raw, np.full(idx.size, bound), ok, {"half_moment": half}
    )


def run_relation(relation_id: str, rule: QuadratureRule, sys: NodeSystem | None = None, band=None) -> RelationReport:
    """Dispatch on ``relation_id``; ``band`` applies to the proven relations only."""
    if relation_id == "circle1":
        return circle_theorem_residuals(rule, band=(-0.9, 0.9) if band is None else band)
    if relation_id == "trapezoid2":
        return trapezoid_residuals(rule, 2, band=band)
    if relation_id == "trapezoid3":
        return trapezoid_residuals(rule, 3, band=band)
    if relation_id == "uniform_circle":
        return uniform_circle_check(rule)
    if relation_id == "secondary_ratio":
        return secondary_ratio_check(rule, sys)
    if relation_id == "intermediate_ratio":
        return intermediate_ratio_check(rule, sys)
    if relation_id == "partial_moment":
        return partial_moment_check(rule, sys)
    raise DomainError(f"unknown relation {relation_id!r}; expected one of {RELATION_IDS}")


# ---------------------------------------------------------------------------
# Bessel-type constant sequences


@dataclass(frozen=True)
class SequenceTable:
    name: str
    entries: list[tuple[int, float]]
    #: expected direction, "increasing" or "decreasing"
    monotone: str
    monotone_ok: bool
    #: first index breaking the expected direction, if any
    first_violation: int | None
    limit_target: float | None
    #: sign or side bound of the sequence (positivity; ``D_i > pi/(6 j_{i+1})`` for D)
    bound_ok: bool

    @property
    def values(self) -> list[float]:
        return [v for _, v in self.entries]

    def value(self, index: int) -> float:
        for i, v in self.entries:
            if i == index:
                return v
        raise KeyError(index)


# name -> (first index, zeros needed beyond count, direction, limit)
_SEQ_META = {
    "a": (0, 0, "decreasing", 0.0),
    "b": (0, 1, "decreasing", 0.0),
    "c": (1, 1, "decreasing", 0.0),
    "k": (0, 0, "increasing", 0.25),
    "C": (0, 0, "increasing", PI2_12),
    "D": (0, 0, "decreasing", 0.0),
    "E": (1, 0, "decreasing", -PI2_6),
    "K": (1, 0, "increasing", PI2_12),
}


def _sequence_values(name: str, count: int) -> tuple[list[int], list[decimal.Decimal], bool]:
    first, extra, _, _ = _SEQ_META[name]
    zeros, j1v = j0_zeros_precise(count + first + extra + 1)
    with decimal.localcontext(decimal.Context(prec=50)):
        # zj[k] = j_k, jv[k] = J1(j_k), t[k] = J1(j_k)^-2; index 0 unused
        zj = (None,) + zeros
        jv = (None,) + j1v
        t = [None] + [1 / (v * v) for v in j1v]
        idx = list(range(first, first + count))
        pi = _DPI
        if name == "a":
            vals = [1 - 2 / (pi * zj[i + 1] * jv[i + 1] ** 2) for i in idx]
            return idx, vals, all(v > 0 for v in vals)
        if name == "b":
            vals = [2 / (zj[i + 2] ** 2 - zj[i + 1] ** 2) * (t[i + 2] + t[i + 1]) - 1 for i in idx]
            return idx, vals, all(v > 0 for v in vals)
        if name == "c":
            vals = [jv[i + 1] ** 2 * (zj[i + 2] ** 2 - zj[i] ** 2) / 8 - 1 for i in idx]
            return idx, vals, all(v > 0 for v in vals)
        if name == "k":
            vals = [zj[i + 1] ** 2 * (1 - 4 / (pi**2 * zj[i + 1] ** 2 * jv[i + 1] ** 4)) for i in idx]
            return idx, vals, all(v > 0 for v in vals)
        if name == "D":
            vals = [pi**2 * jv[i + 1] ** 2 / 12 for i in idx]
            # j J1(j)^2 decreases to 2/pi, so D_i approaches pi/(6 j_{i+1}) from above
            return idx, vals, all(v > pi / (6 * zj[i + 1]) for i, v in zip(idx, vals))
        if name == "C":
            # C_i = 2 sum_{k<i} t_{k+1} + t_{i+1} - j_{i+1}^2 / 2
            vals, acc = [], _D0
            for i in idx:
                vals.append(2 * acc + t[i + 1] - zj[i + 1] ** 2 / 2)
                acc += t[i + 1]
            return idx, vals, True
        if name == "E":
            # E_i = 2 sum_{k=1..i} t_k - (j_i^2 + j_{i+1}^2) / 4
            vals, acc = [], _D0
            for i in idx:
                acc += t[i]
                vals.append(2 * acc - (zj[i] ** 2 + zj[i + 1] ** 2) / 4)
            return idx, vals, True
        # K_i = S1 - S2 / (2 S1), S1 = sum_{k<=i} t_k, S2 = sum_{k<=i} j_k^2 t_k
        vals, s1, s2 = [], _D0, _D0
        for i in idx:
            s1 += t[i]
            s2 += zj[i] ** 2 * t[i]
            vals.append(s1 - s2 / (2 * s1))
        return idx, vals, True


def sequence(name: str, count: int) -> SequenceTable:
    """The first ``count`` terms of a named constant sequence.

    ``a, b, c, D`` come from products of Bessel data, ``C, E, K`` from
    partial sums of ``J1(j_k)^-2``. Everything is evaluated in 50-digit
    decimal arithmetic on the extended-precision zero table and rounded to
    binary64 at the end, so the partial sums need no compensation. Index ranges start at 0
    except for ``c`` (first full zero triple ``j_1, j_2, j_3``), ``E`` and ``K``
    which start at 1. Monotonicity is checked, not enforced.
    """
    if name not in _SEQ_META:
        raise DomainError(f"unknown sequence {name!r}; expected one of {SEQUENCE_NAMES}")
    if count < 2:
        raise DomainError(f"count must be >= 2, got {count}")
    idx, dvals, bound_ok = _sequence_values(name, int(count))
    vals = [float(v) for v in dvals]
    if not all(math.isfinite(v) for v in vals):
        raise DomainError(f"non-finite value in sequence {name!r}")
    direction = _SEQ_META[name][2]
    first_bad = None
    # directions are judged on the extended-precision values; late increments
    # of C, E and K fall below the binary64 spacing of the terms
    for k in range(1, len(dvals)):
        step_ok = dvals[k] > dvals[k - 1] if direction == "increasing" else dvals[k] < dvals[k - 1]
        if not step_ok:
            first_bad = idx[k]
            break
    return SequenceTable(
        name=name,
        entries=list(zip(idx, vals)),
        monotone=direction,
        monotone_ok=first_bad is None,
        first_violation=first_bad,
        limit_target=_SEQ_META[name][3],
        bound_ok=bound_ok,
    )


# ---------------------------------------------------------------------------
# constants measured from exact rules


def _probe_index(relation_id: str, n: int, where: str) -> int:
    """Index of the row whose scaled value is tracked across degrees."""
    centre_node = n // 2 + 1  # smallest strictly positive node (or the middle for odd n)
    pos_node = n // 2 + 1 + n % 2  # smallest node with z_i > 0
    if where == "extreme":
        return {
            "circle1": n,
            "trapezoid2": n - 1,
            "trapezoid3": n - 1,
            "uniform_circle": n,
            "secondary_ratio": n,
            "intermediate_ratio": n - 1,
            "partial_moment": n - 1,
        }[relation_id]
    if where == "center":
        return {
            "circle1": centre_node,
            "trapezoid2": n // 2,
            "trapezoid3": centre_node,
            "uniform_circle": centre_node,
            "secondary_ratio": pos_node,
            "intermediate_ratio": n // 2 + 1 if n % 2 == 0 else (n + 1) // 2,
            "partial_moment": n // 2 if n % 2 == 0 else (n + 1) // 2,
        }[relation_id]
    raise DomainError(f"where must be 'extreme' or 'center', got {where!r}")


def scaled_constant_fit(relation_id: str, n_list: Sequence[int], where: str = "extreme") -> dict:
    """Track one scaled deviation across degrees and extrapolate ``kappa -> oo``.

    The extrapolation removes an ``A / kappa^2`` correction using the two
    largest degrees. Returns ``{"rows": [(n, i, scaled)], "limit": L}``.
    """
    if relation_id not in RELATION_IDS:
        raise DomainError(f"unknown relation {relation_id!r}")
    ns = [int(n) for n in n_list]
    if len(ns) < 3 or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 3:
        raise DomainError("need at least three strictly increasing degrees, all >= 3")
    rows = []
    for n in ns:
        rule = compute_rule(n)
        i = _probe_index(relation_id, n, where)
        if relation_id == "circle1":
            rep = circle_theorem_residuals(rule, band=None)
        else:
            rep = run_relation(relation_id, rule)
        rows.append((n, i, rep.row(i).scaled))
    limit = richardson_kappa2([n + 0.5 for n, _, _ in rows], [s for _, _, s in rows])
    return {"relation_id": relation_id, "where": where, "rows": rows, "limit": limit}


def bound_threshold(relation_id: str, n_max: int) -> dict:
    """Smallest ``n0`` such that the conjectured bound holds for every ``n0 <= n <= n_max``.

    Returns ``{"threshold": n0 or None, "failing": [n, ...]}``; ``None`` means
    the bound fails at ``n_max`` itself.
    """
    if relation_id not in CONJECTURE_IDS:
        raise DomainError(f"{relation_id!r} is not a conjectured bound")
    failing = []
    lo = 1 if relation_id == "uniform_circle" else 2
    for n in range(lo, n_max + 1):
        rep = run_relation(relation_id, compute_rule(n))
        if not rep.all_within:
            failing.append(n)
    if failing and failing[-1] == n_max:
        return {"threshold": None, "failing": failing}
    return {"threshold": failing[-1] + 1 if failing else lo, "failing": failing}
