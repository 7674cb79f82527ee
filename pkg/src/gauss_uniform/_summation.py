"""Compensated summation kernels shared by the rule and node-system builders."""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np
from numpy.typing import NDArray

__all__ = ["csum", "neumaier_cumsum", "tail_sums"]


def csum(values: Iterable[float]) -> float:
    """Correctly rounded sum (Shewchuk partials via :func:`math.fsum`)."""
    return math.fsum(values)


def neumaier_cumsum(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """Running sums ``s_k = v_0 + ... + v_k`` with Neumaier compensation."""
    v = np.asarray(values, dtype=np.float64)
    out = np.empty_like(v)
    s = 0.0
    c = 0.0
    for k, x in enumerate(v.tolist()):
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
        out[k] = s + c
    return out


def tail_sums(values: NDArray[np.float64]) -> NDArray[np.float64]:
    """``t_k = v_{k+1} + ... + v_{end}`` (so the last entry is 0), compensated.

    Summation runs from the small end upward, which is the accurate direction
    for weights that shrink towards the endpoints.
    """
    v = np.asarray(values, dtype=np.float64)
    out = np.zeros_like(v)
    if v.size > 1:
        out[:-1] = neumaier_cumsum(v[:0:-1])[::-1]
    return out
