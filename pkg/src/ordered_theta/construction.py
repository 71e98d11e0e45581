"""Ordered and unordered theta-graph construction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import AmbiguousClosest, BoundaryDegeneracy, DuplicatePoint, GeneralPositionViolation, InvalidOrder
from .geometry import ANGULAR_TOL, ConeSystem, Point, check_general_position

TIE_RTOL = 1e-12


class Edge(NamedTuple):
    u: int
    v: int
    weight: float
    owner: Optional[int] = None
    cone: Optional[int] = None


@dataclass
class SpannerGraph:
    points: list[Point]
    edges: list[Edge] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for e in self.edges:
            adj[e.u].append((e.v, e.weight))
            adj[e.v].append((e.u, e.weight))
        return adj

    def edge_set(self) -> set[frozenset[int]]:
        return {frozenset((e.u, e.v)) for e in self.edges}

    def has_edge(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.edge_set()

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])


def validate_order(order: Sequence[int], n: int) -> list[int]:
    order = [int(i) for i in order]
    if len(order) != n or sorted(order) != list(range(n)):
        raise InvalidOrder(f"order must be a permutation of 0..{n - 1}")
    return order


def perturb_points(points: Sequence[Point], r: float, seed: int = 0) -> list[Point]:
    """Seeded uniform jitter in [-r, r]^2 applied to every point."""
    rng = np.random.default_rng(seed)
    jitter = rng.uniform(-r, r, size=(len(points), 2))
    return [Point(p.x + float(dx), p.y + float(dy)) for p, (dx, dy) in zip(points, jitter)]


def _scan(system: ConeSystem, xy: np.ndarray, apex: int, others: np.ndarray) -> dict[int, int]:
    """Closest vertex (by bisector projection) in every nonempty cone of ``apex``."""
    if others.size == 0:
        return {}
    dx = xy[others, 0] - xy[apex, 0]
    dy = xy[others, 1] - xy[apex, 1]
    if np.any((dx == 0.0) & (dy == 0.0)):
        raise DuplicatePoint(f"vertex {apex} coincides with another vertex")
    t = np.mod(np.arctan2(dx, dy), 2 * math.pi) / system.theta + 0.5
    base = np.floor(t)
    frac = t - base
    if np.any(np.minimum(frac, 1.0 - frac) * system.theta < ANGULAR_TOL):
        raise BoundaryDegeneracy(f"a vertex lies on a cone boundary ray of vertex {apex}")
    cones = base.astype(np.int64) % system.m
    ang = cones * system.theta
    proj = dx * np.sin(ang) + dy * np.cos(ang)
    best: dict[int, int] = {}
    for c in np.unique(cones):
        idx = np.flatnonzero(cones == c)
        order = idx[np.argsort(proj[idx], kind="stable")]
        if order.size > 1:
            d0, d1 = proj[order[0]], proj[order[1]]
            if d1 - d0 <= TIE_RTOL * max(abs(d0), abs(d1)):
                raise AmbiguousClosest(
                    f"vertices {others[order[0]]} and {others[order[1]]} tie in cone {c} of vertex {apex}"
                )
        best[int(c)] = int(others[order[0]])
    return best


def _prepare(system: ConeSystem, points: Sequence[Point], validate: bool, perturb: float, seed: int):
    points = list(points)
    if perturb > 0:
        points = perturb_points(points, perturb, seed)
    if validate:
        report = check_general_position(system, points)
        if not report.ok:
            raise GeneralPositionViolation(report)
    xy = np.array([(p.x, p.y) for p in points], dtype=float).reshape(-1, 2)
    return points, xy


def build_ordered(
    system: ConeSystem,
    points: Sequence[Point],
    order: Sequence[int],
    *,
    validate: bool = True,
    perturb: float = 0.0,
    seed: int = 0,
) -> SpannerGraph:
    """Insert vertices in ``order``; each new vertex links to the closest
    previously inserted vertex in every nonempty cone.

    ``perturb`` > 0 applies seeded jitter of that magnitude before the
    general-position check.
    """
    points, xy = _prepare(system, points, validate, perturb, seed)
    order = validate_order(order, len(points))
    if not points:
        raise InvalidOrder("cannot build a graph on zero points")
    edges = []
    inserted = np.empty(0, dtype=np.int64)
    for u in order:
        for c, v in sorted(_scan(system, xy, u, inserted).items()):
            w = math.hypot(xy[v, 0] - xy[u, 0], xy[v, 1] - xy[u, 1])
            edges.append(Edge(u, v, w, u, c))
        inserted = np.append(inserted, u)
    return SpannerGraph(points, edges)


def build_unordered(
    system: ConeSystem,
    points: Sequence[Point],
    *,
    validate: bool = True,
    perturb: float = 0.0,
    seed: int = 0,
) -> SpannerGraph:
    points, xy = _prepare(system, points, validate, perturb, seed)
    n = len(points)
    edges = []
    seen: set[frozenset[int]] = set()
    everyone = np.arange(n)
    for u in range(n):
        for c, v in sorted(_scan(system, xy, u, everyone[everyone != u]).items()):
            key = frozenset((u, v))
            if key in seen:
                continue
            seen.add(key)
            w = math.hypot(xy[v, 0] - xy[u, 0], xy[v, 1] - xy[u, 1])
            edges.append(Edge(u, v, w, u, c))
    return SpannerGraph(points, edges)


def closest_in_cone(
    system: ConeSystem,
    apex: Point,
    candidates: Sequence[tuple[int, Point]],
    cone: int,
) -> Optional[int]:
    """Candidate index strictly inside ``cone`` of ``apex`` with the smallest
    bisector distance, or None when the cone holds no candidate."""
    if not candidates:
        return None
    xy = np.array([(apex.x, apex.y)] + [(p.x, p.y) for _, p in candidates], dtype=float)
    ids = [i for i, _ in candidates]
    best = _scan(system, xy, 0, np.arange(1, len(ids) + 1)).get(cone % system.m)
    return None if best is None else ids[best - 1]
