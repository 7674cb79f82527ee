"""Log-log slope fits and kappa^-2 extrapolation used by the convergence studies."""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = ["loglog_slope", "richardson_kappa2"]


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``log|y|`` against ``log x``."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.abs(np.asarray(y, dtype=np.float64))
    if xa.size < 2 or xa.size != ya.size:
        raise DomainError("need at least two paired points for a slope fit")
    if np.any(xa <= 0) or np.any(ya <= 0):
        raise DomainError("log-log fit needs positive abscissae and nonzero ordinates")
    slope, _ = np.polyfit(np.log(xa), np.log(ya), 1)
    return float(slope)


def richardson_kappa2(kappas: Sequence[float], values: Sequence[float]) -> float:
    """Eliminate an ``A / kappa^2`` term using the last two samples.

    ``v(kappa) = L + A/kappa^2`` gives
    ``L = (k2^2 v2 - k1^2 v1) / (k2^2 - k1^2)``.
    """
    if len(kappas) < 2 or len(kappas) != len(values):
        raise DomainError("need at least two paired samples to extrapolate")
    k1, k2 = float(kappas[-2]), float(kappas[-1])
    v1, v2 = float(values[-2]), float(values[-1])
    if not k2 > k1:
        raise DomainError("extrapolation samples must increase in kappa")
    a, b = k1 * k1, k2 * k2
    return (b * v2 - a * v1) / (b - a)
