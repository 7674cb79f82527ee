"""Three-point discretizations of the angular diffusion operator ``((1 - x^2) f')'``.

On a Gauss-Legendre mesh with nodes ``x_1..x_n`` and weights ``w_i`` both
schemes read

    (L f)_i = [F_i (f_{i+1} - f_i)/(x_{i+1} - x_i) - F_{i-1} (f_i - f_{i-1})/(x_i - x_{i-1})] / w_i

with face coefficients ``F_i = D(zbar_i) = (1 - zbar_i)(1 + zbar_i)``
(Haldy-Ligou) or ``F_i = m_i``, the first-order partial moments (Morel).
Both vanish at ``i = 0`` and ``i = n``, so the boundary rows simply lose their
outer flux. Summing ``w_i (L f)_i`` telescopes to zero for either choice;
Morel's coefficients also satisfy ``F_i - F_{i-1} = -2 x_i w_i``, which
preserves the first moment and reproduces ``L x = -2x``.

The module also holds the explicit midpoint scheme for ``y' = f(x)`` on a
nonuniform mesh and the check that ``D(zbar_i)`` and ``m_i`` agree to
second order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from ._summation import csum, tail_sums
from .errors import ComputationError, DomainError
from .fitting import loglog_slope
from .legendre import QuadratureRule, compute_rule
from .nodes import NodeSystem, build_node_system
from .relations import partial_moment_check

__all__ = [
    "VARIANTS",
    "DiscreteFPOperator",
    "assemble_fp",
    "apply_fp",
    "moment_check",
    "fp_convergence",
    "error_norm",
    "IVPRun",
    "midpoint_ivp",
    "gauss_zbar_mesh",
    "uniform_mesh",
    "observation_check",
    "TEST_FUNCTIONS",
]

VARIANTS = ("hl", "morel")
_ALIASES = {"hl": "hl", "haldyligou": "hl", "haldy-ligou": "hl", "morel": "morel"}

#: Test functions with their exact image under ((1 - x^2) f')'.
TEST_FUNCTIONS: dict[str, tuple[Callable, Callable]] = {
    "one": (lambda x: np.ones_like(x), lambda x: np.zeros_like(x)),
    "x": (lambda x: np.asarray(x, dtype=float).copy(), lambda x: -2.0 * x),
    "x2": (lambda x: x * x, lambda x: 2.0 - 6.0 * x * x),
    "exp": (np.exp, lambda x: (1.0 - x * x - 2.0 * x) * np.exp(x)),
    "cos": (lambda x: np.cos(np.pi * x),
            lambda x: -np.pi * ((1.0 - x * x) * np.pi * np.cos(np.pi * x) - 2.0 * x * np.sin(np.pi * x))),
}


def _variant(name: str) -> str:
    key = str(name).lower()
    if key not in _ALIASES:
        raise DomainError(f"unknown variant {name!r}; expected 'hl' or 'morel'")
    return _ALIASES[key]


@dataclass(frozen=True)
class DiscreteFPOperator:
    """Tridiagonal operator on nodal values ``f(x_1..x_n)``.

    Row ``i`` (0-based) is ``lower[i] f[i-1] + diag[i] f[i] + upper[i] f[i+1]``;
    ``lower[0]`` and ``upper[-1]`` are zero. ``face[i] = F_{i+1}/(x_{i+2} - x_{i+1})``
    are the interior face conductances from which the rows were built.
    """

    variant: str
    n: int
    lower: NDArray[np.float64]
    diag: NDArray[np.float64]
    upper: NDArray[np.float64]
    face: NDArray[np.float64]
    rule: QuadratureRule
    system: NodeSystem

    def to_dense(self) -> NDArray[np.float64]:
        a = np.diag(self.diag)
        a += np.diag(self.lower[1:], -1)
        a += np.diag(self.upper[:-1], 1)
        return a


def assemble_fp(rule: QuadratureRule, sys: NodeSystem | None, variant: str) -> DiscreteFPOperator:
    """Assemble the Haldy-Ligou (``"hl"``) or Morel (``"morel"``) operator.

    Node gaps are plain differences of the stored binary64 nodes. Those are
    exact (Sterbenz) for neighbouring nodes of equal sign, so a divided
    difference of ``f(x) = x`` is exactly one.
    """
    v = _variant(variant)
    n = rule.n
    if n < 2:
        raise DomainError(f"the operator needs n >= 2, got {n}")
    sys = build_node_system(rule) if sys is None else sys
    x = np.asarray(rule.nodes)
    w = np.asarray(rule.weights)
    gaps = np.diff(x)
    if not np.all(gaps > 0.0):
        bad = int(np.flatnonzero(~(gaps > 0.0))[0]) + 1
        raise ComputationError(f"coincident nodes at index {bad}", index=bad, module="fokker_planck")
    coef = sys.d_zbar if v == "hl" else sys.pm
    face = coef[1:n] / gaps
    lower = np.zeros(n)
    upper = np.zeros(n)
    lower[1:] = face / w[1:]
    upper[:-1] = face / w[:-1]
    diag = -(lower + upper)
    if not (np.all(np.isfinite(diag)) and np.all(lower >= 0.0) and np.all(upper >= 0.0)):
        raise ComputationError(f"invalid {v} coefficients for n={n}", module="fokker_planck")
    for arr in (lower, diag, upper, face):
        arr.setflags(write=False)
    return DiscreteFPOperator(v, n, lower, diag, upper, face, rule, sys)


def apply_fp(op: DiscreteFPOperator, f_values: Sequence[float]) -> NDArray[np.float64]:
    """``L f`` evaluated in flux form.

    Forming the face fluxes ``face_i (f_{i+1} - f_i)`` first and differencing
    them is algebraically the stencil product; it maps constants to exact
    zeros.
    """
    f = np.asarray(f_values, dtype=np.float64)
    if f.shape != (op.n,):
        raise DomainError(f"expected {op.n} values, got shape {f.shape}")
    flux = np.zeros(op.n + 1)
    flux[1:-1] = op.face * np.diff(f)
    return (flux[1:] - flux[:-1]) / op.rule.weights


def moment_check(op: DiscreteFPOperator, f_values: Sequence[float]) -> tuple[float, float]:
    """Discrete moments of ``L f``.

    Returns ``M0 = sum w_i (Lf)_i`` and
    ``M1_residual = sum w_i x_i (Lf)_i + 2 sum w_i x_i f_i``, both with
    correctly rounded summation. Morel's scheme drives both to rounding
    level; Haldy-Ligou's only the first.
    """
    f = np.asarray(f_values, dtype=np.float64)
    lf = apply_fp(op, f)
    w = op.rule.weights
    x = op.rule.nodes
    m0 = csum((w * lf).tolist())
    m1 = csum((w * x * lf).tolist() + (2.0 * w * x * f).tolist())
    return m0, m1


def error_norm(kind: str, err: NDArray[np.float64], rule: QuadratureRule) -> float:
    """``max_interior`` (nodes with ``|x| <= 0.9``) or quadrature-weighted L2 norm of ``err``."""
    if kind == "max_interior":
        sel = np.abs(rule.nodes) <= 0.9
        return float(np.max(np.abs(err[sel])))
    if kind == "weighted_l2":
        return float(np.sqrt(csum((rule.weights * err * err).tolist())))
    raise DomainError(f"norm must be 'max_interior' or 'weighted_l2', got {kind!r}")


def fp_convergence(
    variant: str,
    f: Callable,
    exact_lf: Callable,
    n_list: Sequence[int],
    norm: str = "weighted_l2",
) -> dict:
    """Error of ``L f`` against the exact operator image over a sweep of degrees.

    Returns ``{"rows": [(n, error)], "slope": s}`` with ``s`` the least-squares
    slope of ``log error`` on ``log n``. Errors at rounding level are not
    usable; fewer than three usable points raise :class:`DomainError`.
    """
    v = _variant(variant)
    ns = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("degrees must be strictly increasing")
    rows = []
    for n in ns:
        rule = compute_rule(n)
        op = assemble_fp(rule, None, v)
        x = rule.nodes
        err = apply_fp(op, f(x)) - exact_lf(x)
        rows.append((n, error_norm(norm, err, rule)))
    usable = [(n, e) for n, e in rows if e > 1e-13]
    if len(usable) < 3:
        raise DomainError("fewer than three errors above rounding level; no order can be fitted")
    slope = loglog_slope([n for n, _ in usable], [e for _, e in usable])
    return {"variant": v, "norm": norm, "rows": rows, "slope": slope}


# ---------------------------------------------------------------------------
# midpoint scheme


@dataclass(frozen=True)
class IVPRun:
    mesh_points: NDArray[np.float64]
    step_sizes: NDArray[np.float64]
    offsets: NDArray[np.float64]
    values: NDArray[np.float64]
    errors: NDArray[np.float64] | None
    max_step: float
    max_offset: float

    @property
    def max_error(self) -> float:
        if self.errors is None:
            raise ValueError("run has no reference solution")
        return float(np.max(np.abs(self.errors)))


def midpoint_ivp(
    mesh: Sequence[float],
    offsets: Sequence[float],
    f: Callable,
    eta: float = 0.0,
    steps: Sequence[float] | None = None,
    exact: Callable | None = None,
) -> IVPRun:
    """Solve ``y' = f(x)``, ``y(x_0) = eta`` by ``y_{i+1} = y_i + h_i f(x_i + h_i^*/2)``.

    ``h_i = x_{i+1} - x_i`` unless ``steps`` supplies them exactly, and
    ``h_i^* = h_i + d_i`` with ``d_i = offsets[i]``. Second order needs
    ``max h_i = O(1/n)`` and ``max |d_i| = O(1/n^2)``.
    """
    x = np.asarray(mesh, dtype=np.float64)
    if x.ndim != 1 or x.size < 2 or not np.all(np.diff(x) > 0.0):
        raise DomainError("mesh must be a strictly increasing sequence of at least two points")
    h = np.diff(x) if steps is None else np.asarray(steps, dtype=np.float64)
    d = np.asarray(offsets, dtype=np.float64)
    if h.shape != (x.size - 1,) or d.shape != h.shape:
        raise DomainError("steps and offsets need one entry per mesh interval")
    slopes = np.asarray(f(x[:-1] + 0.5 * (h + d)), dtype=np.float64)
    y = np.empty(x.size)
    y[0] = eta
    acc = float(eta)
    for i in range(h.size):
        acc = acc + h[i] * slopes[i]
        y[i + 1] = acc
    errors = None if exact is None else y - np.asarray(exact(x), dtype=np.float64)
    for arr in (x, h, d, y):
        arr.setflags(write=False)
    return IVPRun(x, h, d, y, errors, float(np.max(h)), float(np.max(np.abs(d))))


def gauss_zbar_mesh(rule: QuadratureRule, sys: NodeSystem | None = None):
    """Mesh ``zbar_0..zbar_n`` with ``h_i = w_{i+1}`` and ``h_i^* = 2 (x_{i+1} - zbar_i)``.

    With ``f = -2x`` and ``eta = 0`` the midpoint values are the partial
    moments. Returns ``(mesh, steps, offsets)``.
    """
    sys = build_node_system(rule) if sys is None else sys
    zb = np.asarray(sys.zbar)
    h = np.asarray(rule.weights).copy()
    d = 2.0 * (rule.nodes - zb[:-1]) - h
    return zb, h, d


def uniform_mesh(n: int, offset_fraction: float = 0.0):
    """Uniform mesh of ``n`` intervals on ``[-1, 1]`` with ``d_i = offset_fraction * h``.

    A nonzero fraction makes ``d_i = O(1/n)`` and breaks second order.
    Returns ``(mesh, steps, offsets)``.
    """
    if n < 1:
        raise DomainError(f"need n >= 1 intervals, got {n}")
    x = np.linspace(-1.0, 1.0, n + 1)
    h = np.diff(x)
    return x, h, offset_fraction * h


# ---------------------------------------------------------------------------
# D(zbar_i) against m_i


def _d_minus_m(rule: QuadratureRule, sys: NodeSystem) -> NDArray[np.float64]:
    """``D(zbar_i) - m_i`` for ``i = 0..n`` as ``2 U_i - T_i^2`` on the upper half."""
    n = rule.n
    T = sys.one_minus_zbar
    U = tail_sums(np.concatenate(([0.0], rule.one_minus_nodes * rule.weights)))
    out = np.empty(n + 1)
    upper = np.arange((n + 1) // 2, n + 1)
    out[upper] = 2.0 * U[upper] - T[upper] ** 2
    out[n - upper] = out[upper]
    return out


def observation_check(n_list: Sequence[int]) -> dict:
    """``max_i |D(zbar_i) - m_i|`` over a sweep of degrees and its log-log slope.

    Each row is ``(n, max_dev, argmax_i, scaled_center, scaled_extreme)``,
    the last two being ``kappa^2 (m_i / D(zbar_i) - 1)`` at the central and
    outermost interior faces.
    """
    ns = [int(n) for n in n_list]
    if len(ns) < 3 or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 2:
        raise DomainError("need at least three strictly increasing degrees, all >= 2")
    rows = []
    for n in ns:
        rule = compute_rule(n)
        sys = build_node_system(rule)
        dev = np.abs(_d_minus_m(rule, sys))
        i = int(dev.size - 1 - np.argmax(dev[::-1]))
        rep = partial_moment_check(rule, sys)
        c = n // 2 if n % 2 == 0 else (n + 1) // 2
        rows.append((n, float(dev[i]), i, rep.row(c).scaled, rep.row(n - 1).scaled))
    slope = loglog_slope([r[0] for r in rows], [r[1] for r in rows])
    return {"rows": rows, "slope": slope}
