"""Cone partitions around a vertex and the predicates built on them.

Directions are measured clockwise from the positive y-axis, so that cone 0
of every vertex is bisected by the vertical half-line above it and cone
indices increase clockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import BoundaryDegeneracy, DuplicatePoint

TWO_PI = 2.0 * math.pi

# Inputs closer than this (radians) to a cone boundary or degenerate
# direction are rejected, never snapped.
ANGULAR_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinate in Point({self.x}, {self.y})")

    def __iter__(self):
        yield self.x
        yield self.y

    def __sub__(self, other: "Point") -> tuple[float, float]:
        return (self.x - other.x, self.y - other.y)


def dist(p: Point, q: Point) -> float:
    return math.hypot(q.x - p.x, q.y - p.y)


def unit(phi: float) -> tuple[float, float]:
    """Unit vector for a direction given clockwise from north."""
    return (math.sin(phi), math.cos(phi))


def heading(dx: float, dy: float) -> float:
    """Clockwise-from-north angle of a vector, in [0, 2pi)."""
    phi = math.atan2(dx, dy)
    return phi + TWO_PI if phi < 0 else phi


@dataclass(frozen=True)
class ConeSystem:
    m: int
    theta: float = field(init=False)

    def __post_init__(self):
        if not isinstance(self.m, (int, np.integer)) or self.m < 3:
            raise ValueError(f"cone count must be an integer >= 3, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "theta", TWO_PI / self.m)

    def bisector(self, i: int) -> float:
        return (i % self.m) * self.theta

    def boundary_directions(self) -> list[float]:
        """Directions of all boundary rays; ray i separates cones i and i+1."""
        return [(i + 0.5) * self.theta for i in range(self.m)]


class CanonicalTriangle(NamedTuple):
    apex: Point
    target: Point
    cone_index: int
    corner_left: Point
    corner_right: Point
    midpoint: Point
    alpha: float


@dataclass
class GeneralPositionReport:
    violations: list[tuple[int, int, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _locate(system: ConeSystem, dx: float, dy: float) -> tuple[int, float]:
    if dx == 0.0 and dy == 0.0:
        raise DuplicatePoint("apex and target coincide")
    phi = heading(dx, dy)
    t = phi / system.theta + 0.5
    base = math.floor(t)
    frac = t - base
    if min(frac, 1.0 - frac) * system.theta < ANGULAR_TOL:
        raise BoundaryDegeneracy(
            f"direction {math.degrees(phi):.12f} deg lies on a boundary ray of a {system.m}-cone system"
        )
    return int(base) % system.m, phi


def cone_index(system: ConeSystem, apex: Point, target: Point) -> int:
    """Index of the cone of ``apex`` that strictly contains ``target``."""
    i, _ = _locate(system, target.x - apex.x, target.y - apex.y)
    return i


def bisector_distance(system: ConeSystem, apex: Point, target: Point) -> float:
    """Length of the projection of apex->target onto its cone's bisector."""
    dx, dy = target.x - apex.x, target.y - apex.y
    i, _ = _locate(system, dx, dy)
    bx, by = unit(system.bisector(i))
    return dx * bx + dy * by


def _angle_gap(a: float, b: float) -> float:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d)


def canonical_triangle(system: ConeSystem, apex: Point, target: Point) -> CanonicalTriangle:
    dx, dy = target.x - apex.x, target.y - apex.y
    i, phi = _locate(system, dx, dy)
    b = system.bisector(i)
    bx, by = unit(b)
    depth = dx * bx + dy * by
    side = depth / math.cos(system.theta / 2)
    lx, ly = unit(b - system.theta / 2)
    rx, ry = unit(b + system.theta / 2)
    return CanonicalTriangle(
        apex=apex,
        target=target,
        cone_index=i,
        corner_left=Point(apex.x + side * lx, apex.y + side * ly),
        corner_right=Point(apex.x + side * rx, apex.y + side * ry),
        midpoint=Point(apex.x + depth * bx, apex.y + depth * by),
        alpha=_angle_gap(phi, b),
    )


def in_canonical_triangle(system: ConeSystem, apex: Point, target: Point, p: Point) -> bool:
    """Whether ``p`` lies strictly inside the canonical triangle of apex->target."""
    if p == apex:
        return False
    i = cone_index(system, apex, target)
    try:
        j = cone_index(system, apex, p)
    except BoundaryDegeneracy:
        return False
    if i != j:
        return False
    return bisector_distance(system, apex, p) < bisector_distance(system, apex, target)


def check_general_position(system: ConeSystem, points: Sequence[Point]) -> GeneralPositionReport:
    """Report every pair that is duplicate, parallel to a boundary ray, or
    perpendicular to a cone bisector (within ``ANGULAR_TOL``)."""
    n = len(points)
    report = GeneralPositionReport()
    if n < 2:
        return report
    xy = np.array([(p.x, p.y) for p in points], dtype=float)
    iu, ju = np.triu_indices(n, k=1)
    dx = xy[ju, 0] - xy[iu, 0]
    dy = xy[ju, 1] - xy[iu, 1]
    same = (dx == 0.0) & (dy == 0.0)
    # line directions live modulo pi
    psi = np.mod(np.arctan2(dx, dy), math.pi)

    def near(dirs: Iterable[float]) -> np.ndarray:
        hit = np.zeros_like(psi, dtype=bool)
        for d in dirs:
            gap = np.abs(np.mod(psi - d + math.pi / 2, math.pi) - math.pi / 2)
            hit |= gap < ANGULAR_TOL
        return hit

    perp = near(system.bisector(i) + math.pi / 2 for i in range(system.m)) & ~same
    parallel = near(system.boundary_directions()) & ~same & ~perp
    for mask, kind in ((same, "duplicate"), (perp, "bisector-perpendicular"), (parallel, "boundary-parallel")):
        for k in np.flatnonzero(mask):
            report.violations.append((int(iu[k]), int(ju[k]), kind))
    report.violations.sort()
    return report
