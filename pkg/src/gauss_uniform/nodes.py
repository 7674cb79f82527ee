"""Node systems derived from a Gauss-Legendre rule.

From the Legendre nodes ``x_1 < ... < x_n`` and weights we build

* secondary intermediate nodes ``zbar_0 = -1``, ``zbar_i = zbar_{i-1} + w_i``;
* secondary nodes ``z_i = (zbar_{i-1} + zbar_i) / 2``;
* primary intermediate nodes ``xbar_i = (x_i + x_{i+1}) / 2``;
* first-order partial moments ``m_0 = 0``, ``m_i = m_{i-1} - 2 x_i w_i``.

Everything is accumulated from the centre of the rule outward on the
nonnegative side and reflected, so odd/even symmetry holds exactly. Near
``x = 1`` the complements ``1 - zbar_i`` are kept separately as tail sums of
weights; they never come from subtracting ``zbar_i`` from one.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ._summation import neumaier_cumsum, tail_sums
from .errors import ComputationError
from .legendre import QuadratureRule

__all__ = ["NodeSystem", "InterlacingReport", "build_node_system", "check_interlacing"]


@dataclass(frozen=True)
class NodeSystem:
    """Secondary and intermediate nodes plus partial moments of one rule.

    Index conventions are 1-based in the docs and 0-based in the arrays:
    ``z[i-1] = z_i`` (``i = 1..n``), ``xbar[i-1] = xbar_i`` (``i = 1..n-1``),
    ``zbar[i] = zbar_i`` and ``pm[i] = m_i`` (``i = 0..n``).
    """

    rule: QuadratureRule
    z: NDArray[np.float64]
    xbar: NDArray[np.float64]
    zbar: NDArray[np.float64]
    pm: NDArray[np.float64]
    #: ``1 - zbar_i`` as a tail sum of weights (accurate near ``zbar = 1``).
    one_minus_zbar: NDArray[np.float64]
    #: ``1 - z_i`` as tail sum plus half weight.
    one_minus_z: NDArray[np.float64]

    @property
    def n(self) -> int:
        return self.rule.n

    @property
    def one_plus_zbar(self) -> NDArray[np.float64]:
        return self.one_minus_zbar[::-1]

    @property
    def d_zbar(self) -> NDArray[np.float64]:
        """Diffusion coefficient ``D(zbar_i) = (1 - zbar_i)(1 + zbar_i)``."""
        return self.one_minus_zbar * self.one_plus_zbar

    @property
    def one_minus_xbar(self) -> NDArray[np.float64]:
        omx = self.rule.one_minus_nodes
        return 0.5 * (omx[:-1] + omx[1:])


def _mirror_odd(pos: NDArray[np.float64], n_out: int) -> NDArray[np.float64]:
    """Antisymmetric array of length ``n_out`` whose upper end is ``pos``."""
    out = np.empty(n_out)
    k = n_out - pos.size
    out[k:] = pos
    out[:k] = -pos[::-1][:k]
    return out


def build_node_system(rule: QuadratureRule, tol: float | None = None) -> NodeSystem:
    """Build all node systems of ``rule``.

    Raises :class:`ComputationError` when the weights fail to sum to 2 within
    ``tol`` (default ``1e-14 * n``).
    """
    n = rule.n
    w = np.asarray(rule.weights)
    x = np.asarray(rule.nodes)
    tol = 1e-14 * n if tol is None else tol
    h = n // 2

    # zbar on the nonnegative side, accumulated from the centre
    if n % 2 == 0:
        pos_z = np.concatenate(([0.0], neumaier_cumsum(w[h:])))
    else:
        half_mid = 0.5 * w[h]
        pos_z = half_mid + np.concatenate(([0.0], neumaier_cumsum(w[h + 1:])))
    top = pos_z[-1]
    if not abs(top - 1.0) <= tol:
        raise ComputationError(
            f"weights of the {n}-point rule sum to {2 * top!r}, not 2", module="node_systems"
        )
    pos_z[-1] = 1.0
    zbar = _mirror_odd(pos_z, n + 1)
    if n % 2 == 0:
        zbar[h] = 0.0

    # tails T_i = sum_{j>i} w_j; accurate for the nonnegative half
    tails = tail_sums(np.concatenate(([0.0], w)))
    omzb = np.empty(n + 1)
    upper = np.arange(n + 1) >= (n + 1) // 2
    omzb[upper] = tails[upper]
    omzb[~upper] = 1.0 - zbar[~upper]

    z = 0.5 * (zbar[:-1] + zbar[1:])
    omz = np.where(x > 0.0, tails[1:] + 0.5 * w, 1.0 - z)

    xbar = 0.5 * (x[:-1] + x[1:])

    # m_i = 2 sum_{j>i} x_j w_j on the upper half, reflected m_{n-i} = m_i
    xw = 2.0 * x * w
    mt = tail_sums(np.concatenate(([0.0], xw)))
    pm = mt.copy()
    lo = np.arange(n + 1) < (n + 1) // 2
    pm[lo] = mt[n - np.arange(n + 1)[lo]]
    pm[0] = pm[n] = 0.0

    for arr in (z, xbar, zbar, pm, omzb, omz):
        arr.setflags(write=False)
    return NodeSystem(rule=rule, z=z, xbar=xbar, zbar=zbar, pm=pm, one_minus_zbar=omzb, one_minus_z=omz)


@dataclass(frozen=True)
class InterlacingReport:
    ok: bool
    worst_margin: float
    worst_index: int
    #: first 1-based node index whose cell ``(zbar_{i-1}, zbar_i)`` misses ``x_i``
    first_violation: int | None = None


def check_interlacing(rule: QuadratureRule, system: NodeSystem) -> InterlacingReport:
    """Check ``zbar_0 < x_1 < zbar_1 < ... < x_n < zbar_n``.

    The margin ``2 |x_j - z_j| / w_j`` measures how far ``x_j`` sits from the
    centre of its cell; interlacing holds iff it stays below one.
    """
    x = np.asarray(rule.nodes)
    w = np.asarray(rule.weights)
    zb = np.asarray(system.zbar)
    inside = (zb[:-1] < x) & (x < zb[1:])
    # x - z via complements on the positive side, mirrored onto the negative
    # side (both systems are antisymmetric), so mirror pairs tie exactly
    diff = np.where(x > 0.0, system.one_minus_z - rule.one_minus_nodes, x - system.z)
    neg = x < 0.0
    diff[neg] = -diff[::-1][neg]
    margin = 2.0 * np.abs(diff) / w
    # ties (mirror pairs) resolve to the node nearest x = 1
    j = margin.size - 1 - int(np.argmax(margin[::-1]))
    bad = np.flatnonzero(~inside)
    ok = bool(inside.all() and margin[j] < 1.0)
    return InterlacingReport(
        ok=ok,
        worst_margin=float(margin[j]),
        worst_index=j + 1,
        first_violation=int(bad[0]) + 1 if bad.size else None,
    )
