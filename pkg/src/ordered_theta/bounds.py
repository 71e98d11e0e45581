"""Closed-form spanning-ratio bounds for ordered theta-graphs.

Families are indexed by the cone count m = 4k + r.  Bounds are evaluated
directly from theta = 2*pi/m; non-spanner families return None and carry
their growth rate through :func:`tower_growth` instead.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple, Optional

from .errors import DegenerateAngle, InvalidConeCount, NotATower


class Family(str, enum.Enum):
    F4K2 = "F4k2"
    F4K3 = "F4k3"
    F4K4 = "F4k4"
    F4K5 = "F4k5"
    NON_SPANNER = "NonSpanner"


class BoundFamily(NamedTuple):
    family: Family
    k: Optional[int]
    m: int


def _theta(m: int) -> float:
    if not isinstance(m, int) or isinstance(m, bool) or m < 3:
        raise InvalidConeCount(f"cone count must be an integer >= 3, got {m!r}")
    return 2 * math.pi / m


def classify(m: int) -> BoundFamily:
    _theta(m)
    if m <= 6:
        return BoundFamily(Family.NON_SPANNER, None, m)
    r = m % 4
    fam = {2: Family.F4K2, 3: Family.F4K3, 0: Family.F4K4, 1: Family.F4K5}[r]
    offset = {2: 2, 3: 3, 0: 4, 1: 5}[r]
    return BoundFamily(fam, (m - offset) // 4, m)


def ruppert_seidel(theta: float) -> float:
    return 1.0 / (1.0 - 2.0 * math.sin(theta / 2))


def f4k4_ratio(theta: float) -> float:
    h = theta / 2
    return 1.0 + 2.0 * math.sin(h) / (math.cos(h) - math.sin(h))


def upper_bound(m: int) -> Optional[float]:
    theta = _theta(m)
    fam = classify(m).family
    if fam is Family.NON_SPANNER:
        return None
    if fam is Family.F4K4:
        return f4k4_ratio(theta)
    return ruppert_seidel(theta)


def lower_bound(m: int) -> Optional[float]:
    theta = _theta(m)
    fam = classify(m).family
    if fam is Family.NON_SPANNER:
        return None
    if fam is Family.F4K2:
        return ruppert_seidel(theta)
    if fam is Family.F4K3:
        return (math.cos(theta / 4) + math.sin(theta)) / math.cos(3 * theta / 4)
    if fam is Family.F4K4:
        return f4k4_ratio(theta)
    return 1.0 + 2.0 * math.sin(theta / 2) * math.cos(theta / 4) / (math.cos(theta / 2) - math.sin(3 * theta / 4))


def is_tight(m: int) -> bool:
    up, lo = upper_bound(m), lower_bound(m)
    return up is not None and lo is not None and abs(up - lo) <= 1e-12 * up


def unordered_4k2_ratio(theta: float) -> float:
    """Tight spanning ratio of the unordered theta_{4k+2}-graph."""
    return 1.0 + 2.0 * math.sin(theta / 2)


def staircase_beta(m: int) -> float:
    """Angle between the horizontal step and the upper ray of the cone that
    contains the leftward direction; the staircase's beta for m = 4k+3/4k+4/4k+5."""
    theta = _theta(m)
    pos = 0.75 * m  # leftward direction measured in cone widths
    return (math.floor(pos + 0.5) + 0.5 - pos) * theta


def staircase_limit(theta: float, beta: float) -> float:
    """Limit of (|ux| + |xw|) / |uw| for the two-line staircase with apex angle
    theta at u and (pi - theta)/2 + beta at w."""
    half = (math.pi - theta) / 2
    den = math.sin(half - beta)
    if not 0 < beta < half or den <= 1e-12:
        raise DegenerateAngle(f"beta={beta!r} outside (0, (pi - theta)/2) for theta={theta!r}")
    return (math.sin(half + beta) + math.sin(theta)) / den


def staircase_limit_4k2(theta: float) -> float:
    den = math.sin((math.pi - 3 * theta) / 2)
    if theta <= 0 or den <= 1e-12:
        raise DegenerateAngle(f"theta={theta!r} must lie in (0, pi/3)")
    return (math.sin((math.pi + theta) / 2) + math.sin(theta)) / den


def theorem_bound_factor(theta: float, alpha: float) -> float:
    """Path-length factor guaranteed for a pair whose canonical triangle has
    angle ``alpha`` between uw and the bisector, m = 4k+4."""
    h = theta / 2
    c = 1.0 / (math.cos(h) - math.sin(h))
    return math.cos(alpha) / math.cos(h) + c * (math.cos(alpha) * math.tan(h) + math.sin(alpha))


def tower_growth(m: int) -> float:
    """Path-length increment per tower step with |uw| = 1.

    m = 3, 4, 5: one step is one staircase vertex; every such vertex adds a
    diagonal edge of length cos(theta/4) / cos(theta/2) (cos(0)/cos(pi/4) for
    m = 4, whose stationary pair is vertical).  m = 6: one step is a
    four-vertex configuration, adding 2.
    """
    _theta(m)
    if m == 3:
        return math.cos(math.pi / 6) / math.cos(math.pi / 3)
    if m == 4:
        return math.sqrt(2.0)
    if m == 5:
        return math.cos(math.pi / 10) / math.cos(math.pi / 5)
    if m == 6:
        return 2.0
    raise NotATower(f"ordered theta_{m}-graphs are spanners; no tower exists")
