"""The verification suite behind ``verify-all``.

Each ``criterion_*`` function measures one group of properties and returns a
list of :class:`Check` rows. The ``quick`` tier keeps every degree at or
below 500; ``full`` uses the complete sweeps (degrees up to 5000).
"""
from __future__ import annotations

import decimal
import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .asymptotics import residual_scaling
from .bessel import _HP_SERIES, _HP_STOP, _series_dec, j0_zeros
from .constants import REFERENCE
from .fitting import loglog_slope
from .fokker_planck import (
    TEST_FUNCTIONS,
    VARIANTS,
    apply_fp,
    assemble_fp,
    fp_convergence,
    midpoint_ivp,
    moment_check,
    observation_check,
    uniform_mesh,
)
from .legendre import compute_rule, legendre_eval
from .nodes import build_node_system
from .relations import (
    CONJECTURE_IDS,
    bound_threshold,
    partial_moment_check,
    scaled_constant_fit,
    sequence,
    uniform_circle_check,
)

__all__ = ["Check", "CRITERIA", "run_suite", "bisect_legendre_nodes", "bisect_j0_zeros"]

PI2_12 = math.pi**2 / 12.0
PI2_6 = math.pi**2 / 6.0


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    measured: float
    reference: float | None
    tolerance: float | None
    passed: bool
    seconds: float = 0.0
    detail: str = ""


def _close(criterion, name, measured, ref, tol, seconds=0.0, detail="") -> Check:
    ok = bool(math.isfinite(measured) and abs(measured - ref) <= tol)
    return Check(criterion, name, float(measured), float(ref), float(tol), ok, seconds, detail)


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.t0


# ---------------------------------------------------------------------------
# brute-force oracles


def bisect_legendre_nodes(n: int, pieces: int = 10_000) -> np.ndarray:
    """Roots of ``P_n`` by sign changes on ``pieces`` subintervals and bisection."""
    grid = np.linspace(-1.0, 1.0, pieces + 1)
    vals, _ = legendre_eval(n, grid)
    roots = []
    for k in range(pieces):
        a, b = float(grid[k]), float(grid[k + 1])
        fa, fb = float(vals[k]), float(vals[k + 1])
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb > 0.0:
            continue
        while True:
            m = 0.5 * (a + b)
            if m <= a or m >= b:
                break
            fm = legendre_eval(n, m)[0]
            if fm == 0.0:
                a = b = m
                break
            if (fm < 0.0) == (fa < 0.0):
                a, fa = m, fm
            else:
                b = m
        roots.append(0.5 * (a + b))
    return np.array(sorted(set(roots)))


def _j0_precise(x: float) -> float:
    return float(_series_dec(decimal.Decimal(x), 0, _HP_SERIES, _HP_STOP))


def bisect_j0_zeros(count: int) -> list[float]:
    """Zeros of J0 by bisection on the extended-precision power series."""
    out = []
    for k in range(1, count + 1):
        a, b = (k - 0.75) * math.pi, (k - 0.25) * math.pi + 0.1
        fa = _j0_precise(a)
        while True:
            m = 0.5 * (a + b)
            if m <= a or m >= b:
                break
            fm = _j0_precise(m)
            if (fm < 0.0) == (fa < 0.0):
                a, fa = m, fm
            else:
                b = m
        out.append(0.5 * (a + b))
    return out


# ---------------------------------------------------------------------------
# criteria


def criterion_1(quick: bool = True) -> list[Check]:
    with _Timer() as t:
        vals = {
            "a0": sequence("a", 2).value(0),
            "a1": sequence("a", 2).value(1),
            "b0": sequence("b", 2).value(0),
            "c1": sequence("c", 2).value(1),
            "C0": sequence("C", 2).value(0),
            "D0": sequence("D", 2).value(0),
            "D1": sequence("D", 2).value(1),
            "E1": sequence("E", 2).value(1),
            "K1": sequence("K", 2).value(1),
        }
    return [
        _close(1, f"{k} vs printed", v, REFERENCE[k].value, 5e-7, t.seconds / len(vals))
        for k, v in vals.items()
    ] + [Check(1, "runtime < 1 s", t.seconds, 1.0, None, t.seconds < 1.0, t.seconds)]


def criterion_2(quick: bool = True) -> list[Check]:
    with _Timer() as t:
        k100 = sequence("K", 100).value(100)
    return [_close(2, "K_100 vs pi^2/12", k100, PI2_12, 1e-6, t.seconds)]


def criterion_3(quick: bool = True) -> list[Check]:
    with _Timer() as t:
        bad = []
        worst = 0.0
        # near n = 5000 the central margin (~3e-8 relative) equals the rounding
        # of 1 - x^2 - y^2 itself, so the sweep stops at 2000
        sweep = list(range(1, 501)) + ([] if quick else [1000, 2000])
        for n in sweep:
            rep = uniform_circle_check(compute_rule(n))
            if not rep.all_within:
                bad.append(n)
            top = max(r.raw * 4 * (n + 0.5) ** 2 for r in rep.per_index)
            worst = max(worst, top)
    detail = f"max 4 kappa^2 (1 - x^2 - y^2) = {worst:.6f}; failing n: {bad[:5]}"
    label = "n = 1..500" if quick else "n = 1..500, 1000, 2000"
    return [Check(3, f"uniform circle bound, {label}", float(len(bad)), 0.0, 0.0,
                  not bad and t.seconds < 20.0, t.seconds, detail)]


def criterion_4(quick: bool = True) -> list[Check]:
    out = []
    targets = {"a": 0.0, "k": 0.25, "C": PI2_12, "E": -PI2_6, "K": PI2_12}
    for name, target in targets.items():
        with _Timer() as t:
            tab = sequence(name, 200)
        last = tab.values[-1]
        ok = tab.monotone_ok and abs(last - target) <= 1e-3
        out.append(Check(4, f"{name}: {tab.monotone} over 200 terms, limit gap", last, target, 1e-3, ok,
                         t.seconds, f"first violation: {tab.first_violation}"))
    return out


def criterion_5(quick: bool = True) -> list[Check]:
    ns = [125, 250, 500] if quick else [250, 500, 1000]
    k0 = sequence("k", 2).value(0)
    cases = [
        ("secondary_ratio", "extreme", REFERENCE["C0"].value, 1e-4),
        ("trapezoid2", "center", 0.8224670, 1e-3),
        ("trapezoid3", "center", -1.6449340, 2e-3),
        ("uniform_circle", "extreme", k0, 1e-3),
    ]
    out = []
    for rid, where, ref, tol in cases:
        with _Timer() as t:
            fit = scaled_constant_fit(rid, ns, where)
        out.append(_close(5, f"{rid} ({where}) extrapolated, n = {ns}", fit["limit"], ref, tol, t.seconds))
    return out


def criterion_6(quick: bool = True) -> list[Check]:
    pairs = [(500, 501)] if quick else [(1000, 1001), (5000, 5001)]
    cases = [(n, ref, tol) for ne, no in pairs for n, ref, tol in ((ne, PI2_12, 1e-2), (no, -PI2_6, 2e-2))]
    out = []
    for n, ref, tol in cases:
        with _Timer() as t:
            half = partial_moment_check(compute_rule(n)).extras["half_moment"]
        out.append(_close(6, f"half moment kappa^2 (m_c - 1), n = {n}", half["scaled"], ref, tol, t.seconds))
    return out


def criterion_7(quick: bool = True) -> list[Check]:
    ns = (10, 100, 500) if quick else (10, 100, 1000)
    out = []
    with _Timer() as t:
        worst = {("morel", 0): 0.0, ("morel", 1): 0.0, ("hl", 0): 0.0}
        hl_m1 = math.inf
        for n in ns:
            rule = compute_rule(n)
            sys = build_node_system(rule)
            for v in VARIANTS:
                op = assemble_fp(rule, sys, v)
                for key in ("one", "x", "x2", "exp"):
                    f = TEST_FUNCTIONS[key][0](rule.nodes)
                    scale = float(np.max(np.abs(f)))
                    m0, m1 = moment_check(op, f)
                    worst[(v, 0)] = max(worst[(v, 0)], abs(m0) / scale)
                    if v == "morel":
                        worst[(v, 1)] = max(worst[(v, 1)], abs(m1) / scale)
                    elif key == "exp":
                        # odd moments of even f vanish by symmetry, so probe with exp
                        hl_m1 = min(hl_m1, abs(m1))
    for (v, k), val in worst.items():
        label = f"{v} |M{k}| / max|f|, n in {ns}"
        out.append(Check(7, label, val, 0.0, 1e-12, val < 1e-12, t.seconds / 3))
    out.append(Check(7, "hl M1 residual on exp(x) is nonzero", hl_m1, None, None, hl_m1 > 0.0, 0.0))
    return out


def criterion_8(quick: bool = True) -> list[Check]:
    ns = list(range(2, 501, 7)) + [500] if quick else list(range(2, 2001, 13)) + [2000]
    with _Timer() as t:
        worst = 0.0
        for n in ns:
            rule = compute_rule(n)
            op = assemble_fp(rule, None, "morel")
            err = float(np.max(np.abs(apply_fp(op, rule.nodes) + 2.0 * rule.nodes)))
            worst = max(worst, err / (1e-13 * n))
    return [Check(8, f"Morel max |L x + 2x| / (1e-13 n), n <= {ns[-1]}", worst, 0.0, 1.0, worst < 1.0, t.seconds)]


def criterion_9(quick: bool = True) -> list[Check]:
    out = []
    with _Timer() as t:
        for v in VARIANTS:
            for key in ("x2", "exp"):
                fit = fp_convergence(v, *TEST_FUNCTIONS[key], [32, 64, 128, 256], "weighted_l2")
                out.append(_close(9, f"{v} order on {key} (weighted L2)", fit["slope"], -2.0, 0.3))
        ns = [64, 128, 256, 512]
        errs = []
        for n in ns:
            mesh, h, d = uniform_mesh(n)
            run = midpoint_ivp(mesh, d, lambda x: np.cos(np.pi * x), 0.0, h, lambda x: np.sin(np.pi * x) / np.pi)
            errs.append(run.max_error)
        out.append(_close(9, "midpoint IVP order on cos(pi x)", loglog_slope(ns, errs), -2.0, 0.15))
        obs = observation_check([100, 200, 400, 800])
        out.append(_close(9, "max |D(zbar) - m| order", obs["slope"], -2.0, 0.15))
    out.append(Check(9, "runtime < 30 s", t.seconds, 30.0, None, t.seconds < 30.0, t.seconds))
    return out


def criterion_10(quick: bool = True) -> list[Check]:
    with _Timer() as t:
        worst = 0.0
        for n in range(1, 13):
            ref = bisect_legendre_nodes(n)
            got = compute_rule(n).nodes
            if ref.size != n:
                worst = math.inf
                break
            worst = max(worst, float(np.max(np.abs(ref - got))))
        zref = np.array(bisect_j0_zeros(10))
        zerr = float(np.max(np.abs(zref - j0_zeros(10).zeros)))
    return [
        Check(10, "Newton vs bisection nodes, n <= 12", worst, 0.0, 1e-13, worst <= 1e-13, t.seconds),
        Check(10, "j_1..j_10 vs series bisection", zerr, 0.0, 1e-12, zerr <= 1e-12, 0.0),
    ]


def criterion_11(quick: bool = True) -> list[Check]:
    ns = [50, 100, 200, 400] if quick else [100, 200, 400, 800, 1600]
    out = []
    for kind, target in (("elem_node", -4.0), ("elem_weight", -5.0), ("bessel_node", -4.0), ("bessel_weight", -4.0)):
        with _Timer() as t:
            fit = residual_scaling(kind, ns)
        out.append(_close(11, f"{kind} residual slope", fit["slope"], target, 0.3, t.seconds))
    return out


CRITERIA: dict[int, Callable[[bool], list[Check]]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def conjecture_thresholds(n_max: int) -> list[dict]:
    """Empirical start of each conjectured bound up to ``n_max`` (reported, never fatal)."""
    rows = []
    for rid in CONJECTURE_IDS:
        res = bound_threshold(rid, n_max)
        rows.append({"relation": rid, "n_max": n_max, "threshold": res["threshold"], "failing": res["failing"]})
    return rows


def run_suite(quick: bool = True, criteria=None, executor=None) -> list[Check]:
    """Run the selected criteria; with an executor they run concurrently, results stay ordered."""
    ids = sorted(CRITERIA) if criteria is None else list(criteria)
    if executor is None:
        results = [CRITERIA[i](quick) for i in ids]
    else:
        futures = [executor.submit(CRITERIA[i], quick) for i in ids]
        results = [f.result() for f in futures]
    return [c for group in results for c in group]
