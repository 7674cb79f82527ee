"""Command-line entry point: ``gauss-uniform <subcommand> ...``.

Every subcommand writes a table as CSV (17 significant digits) or JSON
(shortest round-trip floats) to standard output or ``--output``. Summary
lines for CSV go to standard error, prefixed with ``#``.

Exit status: 0 on success, 1 when a computation fails or a verification
check does not pass, 2 for invalid arguments.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from . import __version__
from .asymptotics import RESIDUAL_KINDS, residual_scaling
from .bessel import j0_zeros, sonin_check
from .constants import REFERENCE
from .errors import ComputationError, DomainError, VerificationFailure
from .fitting import loglog_slope
from .fokker_planck import (
    TEST_FUNCTIONS,
    apply_fp,
    assemble_fp,
    error_norm,
    gauss_zbar_mesh,
    midpoint_ivp,
    moment_check,
    uniform_mesh,
)
from .legendre import compute_rule
from .nodes import build_node_system
from .relations import RELATION_IDS, SEQUENCE_NAMES, run_relation, sequence

THREADS_ENV = "GAUSS_UNIFORM_THREADS"

_IVP_TESTS = {
    "cos": (lambda x: np.cos(np.pi * x), lambda x: np.sin(np.pi * x) / np.pi),
    "linear": (lambda x: -2.0 * x, lambda x: 1.0 - x * x),
}


@dataclass
class RunConfig:
    subcommand: str
    fmt: str = "csv"
    output: str | None = None
    options: dict[str, Any] = field(default_factory=dict)


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map(fn, items):
    """Ordered map, concurrent when the thread-count variable asks for it."""
    items = list(items)
    k = _threads()
    if k == 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# argument types


def _n_list(text: str) -> list[int]:
    try:
        ns = [int(t) for t in text.replace(" ", ",").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}")
    if not ns or any(n < 1 for n in ns):
        raise argparse.ArgumentTypeError("degrees must be >= 1")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise argparse.ArgumentTypeError("degrees must be strictly increasing")
    return ns


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("value must be >= 1")
    return v


def _band(text: str) -> tuple[float, float]:
    try:
        a, b = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"band must look like a,b: {text!r}")
    if not -1.0 < a < b < 1.0:
        raise argparse.ArgumentTypeError("band must satisfy -1 < a < b < 1")
    return a, b


# ---------------------------------------------------------------------------
# output


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (np.floating, float)):
        f = float(v)
        return f if math.isfinite(f) else None
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _emit(cfg: RunConfig, columns: Sequence[str], rows: list[Sequence], summary: dict | None = None) -> None:
    if cfg.fmt == "json":
        doc = {"command": cfg.subcommand, "rows": [dict(zip(columns, r)) for r in rows]}
        if summary:
            doc["summary"] = summary
        text = json.dumps(_jsonable(doc), indent=1) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for r in rows:
            writer.writerow([_cell(v) for v in r])
        text = buf.getvalue()
        if summary:
            for k, v in summary.items():
                print(f"# {k}: {v}", file=sys.stderr)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_rule(cfg: RunConfig) -> int:
    rule = compute_rule(cfg.options["n"])
    rows = [(i + 1, rule.thetas[i], rule.nodes[i], rule.weights[i]) for i in range(rule.n)]
    _emit(cfg, ("i", "theta", "x", "w"), rows)
    return 0


def _cmd_nodesets(cfg: RunConfig) -> int:
    rule = compute_rule(cfg.options["n"])
    sys_ = build_node_system(rule)
    n = rule.n
    rows = []
    for i in range(n + 1):
        node = 0 < i <= n
        rows.append((
            i,
            rule.nodes[i - 1] if node else None,
            rule.weights[i - 1] if node else None,
            sys_.z[i - 1] if node else None,
            sys_.xbar[i - 1] if 0 < i < n else None,
            sys_.zbar[i],
            sys_.one_minus_zbar[i],
            sys_.pm[i],
        ))
    _emit(cfg, ("i", "x", "w", "z", "xbar", "zbar", "one_minus_zbar", "m"), rows)
    return 0


def _cmd_asym(cfg: RunConfig) -> int:
    o = cfg.options
    fit = residual_scaling(o["kind"], o["n"], fraction=o["fraction"])
    rows = [(fit["kind"], n, k, r, fit["slope"]) for n, k, r in fit["rows"]]
    _emit(cfg, ("kind", "n", "kappa", "residual", "slope"), rows,
          {"slope": fit["slope"], "flagged": fit["flagged"]})
    return 0


def _cmd_check(cfg: RunConfig) -> int:
    o = cfg.options
    rid = o["relation"]

    def one(n):
        return run_relation(rid, compute_rule(n), band=o["band"])

    reports = _map(one, o["n"])
    rows = []
    passing = []
    for rep in reports:
        rows.extend((rep.n, r.i, r.raw, r.scaled, r.bound, r.within_bound) for r in rep.per_index)
        passing.append((rep.n, rep.all_within))
    # smallest n of the sweep from which every later n passes
    threshold = None
    for n, ok in reversed(passing):
        if not ok:
            break
        threshold = n
    summary = {
        "relation": rid,
        "all_within": all(ok for _, ok in passing),
        "bound_holds_from_n": threshold,
        "extremal_scaled": {rep.n: rep.extremal_scaled for rep in reports},
    }
    for rep in reports:
        if "half_moment" in rep.extras:
            summary.setdefault("half_moment", {})[rep.n] = rep.extras["half_moment"]
    _emit(cfg, ("n", "i", "raw", "scaled", "bound", "pass"), rows, summary)
    return 0


def _cmd_sequences(cfg: RunConfig) -> int:
    tab = sequence(cfg.options["name"], cfg.options["count"])
    rows = [(tab.name, i, v) for i, v in tab.entries]
    _emit(cfg, ("name", "index", "value"), rows, {
        "monotone": tab.monotone,
        "monotone_ok": tab.monotone_ok,
        "first_violation": tab.first_violation,
        "bound_ok": tab.bound_ok,
        "limit_target": tab.limit_target,
    })
    return 0


def _cmd_bessel_zeros(cfg: RunConfig) -> int:
    tab = j0_zeros(cfg.options["count"])
    rows = [(k + 1, tab.zeros[k], tab.j1_values[k]) for k in range(tab.count)]
    _emit(cfg, ("k", "j_k", "J1(j_k)"), rows)
    return 0


def _cmd_sonin(cfg: RunConfig) -> int:
    vals = sonin_check(cfg.options["nu"], cfg.options["count"])
    _emit(cfg, ("k", "value"), [(k + 1, v) for k, v in enumerate(vals)])
    return 0


def _cmd_fp(cfg: RunConfig) -> int:
    o = cfg.options
    f, exact = TEST_FUNCTIONS[o["test"]]

    def one(n):
        rule = compute_rule(n)
        op = assemble_fp(rule, None, o["variant"])
        fv = f(rule.nodes)
        err = apply_fp(op, fv) - exact(rule.nodes)
        e = error_norm(o["norm"], err, rule)
        m0, m1 = moment_check(op, fv)
        return n, e, m0, m1

    res = _map(one, o["n"])
    usable = [(n, e) for n, e, _, _ in res if e > 1e-13]
    slope = loglog_slope(*zip(*usable)) if len(usable) >= 2 else None
    rows = [(n, e, slope, m0, m1) for n, e, m0, m1 in res]
    _emit(cfg, ("n", "error", "slope", "M0", "M1_residual"), rows,
          {"variant": o["variant"], "test": o["test"], "norm": o["norm"], "slope": slope})
    return 0


def _cmd_ivp(cfg: RunConfig) -> int:
    o = cfg.options
    f, exact = _IVP_TESTS[o["test"]]
    rows = []
    errs = []
    for n in o["n"]:
        if o["mesh"] == "gauss":
            mesh, h, d = gauss_zbar_mesh(compute_rule(n))
        else:
            mesh, h, d = uniform_mesh(n, o["offset_fraction"])
        run = midpoint_ivp(mesh, d, f, 0.0, h, exact)
        errs.append(run.max_error)
        rows.append([n, run.max_error, run.max_step, run.max_offset])
    good = [(n, e) for n, e in zip(o["n"], errs) if e > 1e-14]
    slope = loglog_slope(*zip(*good)) if len(good) >= 2 else None
    for r in rows:
        r.append(slope)
    _emit(cfg, ("n", "max_error", "max_step", "max_offset", "slope"), rows,
          {"mesh": o["mesh"], "test": o["test"], "slope": slope})
    return 0


def _cmd_verify_all(cfg: RunConfig) -> int:
    from .verify import conjecture_thresholds, run_suite

    quick = not cfg.options["full"]
    crit = cfg.options["criteria"]
    k = _threads()
    if k > 1:
        with ThreadPoolExecutor(max_workers=k) as pool:
            checks = run_suite(quick, crit, pool)
    else:
        checks = run_suite(quick, crit)
    rows = [
        (c.criterion, c.name, c.measured, c.reference, c.tolerance, "PASS" if c.passed else "FAIL",
         round(c.seconds, 4), c.detail)
        for c in checks
    ]
    thresholds = conjecture_thresholds(60 if quick else 300)
    summary = {
        "tier": "quick" if quick else "full",
        "passed": sum(c.passed for c in checks),
        "failed": sum(not c.passed for c in checks),
        "conjectured_bounds": {
            t["relation"]: (f"holds from n = {t['threshold']}" if t["threshold"] is not None
                            else f"fails up to n = {t['n_max']}")
            for t in thresholds
        },
        "reference_constants": {k: v.value for k, v in REFERENCE.items() if v.kind == "printed"},
    }
    if cfg.fmt == "csv" and not cfg.output:
        _print_table(checks)
    _emit(cfg, ("criterion", "check", "measured", "reference", "tolerance", "status", "seconds", "detail"),
          rows, summary)
    return 0 if all(c.passed for c in checks) else 1


def _print_table(checks) -> None:
    for c in checks:
        ref = "" if c.reference is None else f"{c.reference:.10g}"
        line = f"{'PASS' if c.passed else 'FAIL'}  [{c.criterion:2d}] {c.name}: measured {c.measured:.10g}"
        if ref:
            line += f", reference {ref}"
        print(line, file=sys.stderr)


_COMMANDS = {
    "rule": _cmd_rule,
    "nodesets": _cmd_nodesets,
    "asym": _cmd_asym,
    "check": _cmd_check,
    "sequences": _cmd_sequences,
    "bessel-zeros": _cmd_bessel_zeros,
    "sonin": _cmd_sonin,
    "fp": _cmd_fp,
    "ivp": _cmd_ivp,
    "verify-all": _cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="gauss-uniform", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("rule", parents=[common], help="Gauss-Legendre nodes and weights")
    s.add_argument("--n", type=_positive, required=True)

    s = sub.add_parser("nodesets", parents=[common], help="secondary/intermediate nodes and partial moments")
    s.add_argument("--n", type=_positive, required=True)

    s = sub.add_parser("asym", parents=[common], help="residual decay of the asymptotic approximations")
    s.add_argument("--kind", choices=RESIDUAL_KINDS, required=True)
    s.add_argument("--n", type=_n_list, default=[50, 100, 200, 400])
    s.add_argument("--fraction", type=float, default=0.75)

    s = sub.add_parser("check", parents=[common], help="per-node relation report")
    s.add_argument("--relation", choices=RELATION_IDS, required=True)
    s.add_argument("--n", type=_n_list, required=True)
    s.add_argument("--band", type=_band, default=None, help="restrict theorem relations to a,b")

    s = sub.add_parser("sequences", parents=[common], help="Bessel-type constant sequences")
    s.add_argument("--name", choices=SEQUENCE_NAMES, required=True)
    s.add_argument("--count", type=_positive, required=True)

    s = sub.add_parser("bessel-zeros", parents=[common], help="zeros of J0")
    s.add_argument("--count", type=_positive, required=True)

    s = sub.add_parser("sonin", parents=[common], help="monotonicity of c y'(c)^2 at successive zeros")
    s.add_argument("--nu", type=float, choices=(0.0, 0.5), default=0.0)
    s.add_argument("--count", type=_positive, default=20)

    s = sub.add_parser("fp", parents=[common], help="discrete Fokker-Planck operator errors and moments")
    s.add_argument("--variant", choices=("hl", "morel"), required=True)
    s.add_argument("--n", type=_n_list, default=[32, 64, 128, 256])
    s.add_argument("--test", choices=tuple(TEST_FUNCTIONS), default="x2")
    s.add_argument("--norm", choices=("weighted_l2", "max_interior"), default="weighted_l2")

    s = sub.add_parser("ivp", parents=[common], help="midpoint scheme on Gauss or uniform meshes")
    s.add_argument("--mesh", choices=("gauss", "uniform"), required=True)
    s.add_argument("--n", type=_n_list, default=[64, 128, 256, 512])
    s.add_argument("--test", choices=tuple(_IVP_TESTS), default="cos")
    s.add_argument("--offset-fraction", type=float, default=0.0,
                   help="uniform mesh only: d_i = fraction * h_i")

    s = sub.add_parser("verify-all", parents=[common], help="run the acceptance suite")
    tier = s.add_mutually_exclusive_group()
    tier.add_argument("--quick", action="store_true", help="degrees up to 500 (default)")
    tier.add_argument("--full", action="store_true", help="degrees up to 5000")
    s.add_argument("--criteria", type=_n_list, default=None, help="subset of criterion numbers")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    opts = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "fmt", "output")}
    return RunConfig(subcommand=ns.subcommand, fmt=ns.fmt, output=ns.output, options=opts)


def run(cfg: RunConfig) -> int:
    try:
        return _COMMANDS[cfg.subcommand](cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ComputationError as exc:
        where = f" [module {exc.module}, index {exc.index}]" if exc.module or exc.index is not None else ""
        print(f"computation failed{where}: {exc}", file=sys.stderr)
        return 1
    except VerificationFailure as exc:
        print(f"verification failed at index {exc.index}: {exc}", file=sys.stderr)
        return 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.subcommand == "verify-all" and ns.criteria:
        from .verify import CRITERIA

        unknown = [c for c in ns.criteria if c not in CRITERIA]
        if unknown:
            parser.error(f"unknown criteria: {unknown}")
    return run(_config(ns))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
