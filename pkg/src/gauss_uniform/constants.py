"""Reference constants used by the verification suite.

``printed`` values are the published decimal expansions the package is
compared against; ``exact`` values are closed forms. Each entry says how the
package measures the same quantity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["ReferenceConstant", "REFERENCE", "reference"]


@dataclass(frozen=True)
class ReferenceConstant:
    name: str
    value: float
    kind: str  # "printed" or "exact"
    description: str
    measured_by: str


_TABLE = [
    ReferenceConstant("a0", 0.0177079, "printed",
                      "circle-theorem defect 1 - 2/(pi j_1 J1(j_1)^2) at the outermost node",
                      "sequence('a')[0]"),
    ReferenceConstant("a1", 0.0039098, "printed",
                      "circle-theorem defect at the second outermost node",
                      "sequence('a')[1]"),
    ReferenceConstant("b0", 0.0002756, "printed",
                      "trapezoid-2 defect of the outermost node pair",
                      "sequence('b')[0]"),
    ReferenceConstant("c1", 0.00010624, "printed",
                      "trapezoid-3 defect of the outermost node triple (zeros j_1, j_2, j_3)",
                      "sequence('c')[1]"),
    ReferenceConstant("C0", 0.8187877, "printed",
                      "scaled secondary-ratio constant at the outermost node",
                      "sequence('C')[0]"),
    ReferenceConstant("D0", 0.2216664, "printed",
                      "interlacing margin bound pi^2 J1(j_1)^2 / 12 of the last cell",
                      "sequence('D')[0]"),
    ReferenceConstant("D1", 0.0952253, "printed",
                      "interlacing margin bound of the second last cell",
                      "sequence('D')[1]"),
    ReferenceConstant("E1", -1.6428507, "printed",
                      "scaled intermediate-ratio constant at the outermost interior face",
                      "sequence('E')[1]"),
    ReferenceConstant("K1", 0.8187877, "printed",
                      "scaled partial-moment constant at the outermost interior face",
                      "sequence('K')[1]"),
    ReferenceConstant("k0", 0.20365, "printed",
                      "scaled uniform-circle deviation at the outermost node",
                      "sequence('k')[0]"),
    ReferenceConstant("pi2_12", math.pi**2 / 12.0, "exact",
                      "interior limit of the secondary-ratio, trapezoid-2 and partial-moment constants",
                      "limits of C, K"),
    ReferenceConstant("minus_pi2_6", -(math.pi**2) / 6.0, "exact",
                      "interior limit of the trapezoid-3 and intermediate-ratio constants",
                      "limit of E"),
    ReferenceConstant("quarter", 0.25, "exact",
                      "limit of the uniform-circle constants k_i",
                      "limit of k"),
]

REFERENCE: dict[str, ReferenceConstant] = {c.name: c for c in _TABLE}


def reference(name: str) -> float:
    return REFERENCE[name].value
