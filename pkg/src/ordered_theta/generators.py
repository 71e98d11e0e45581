"""Adversarial point sets with their insertion orders, plus random instances.

Every "arbitrarily close" placement is realised as an offset of ``eps`` times
the local scale into the permitted region, followed by seeded jitter of
``eps / 100`` times the local scale.

Converging staircases shrink geometrically, so after a few dozen steps the
points would no longer be distinguishable in double precision around a
fixed origin.  Those instances are expressed with the limit point the
staircase converges to at the origin: every step is computed at unit scale
relative to its own pair, and positions are suffix sums of the per-step
displacements.  u then sits at a nonzero position and |uw| is still 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .bounds import BoundFamily, Family, classify, staircase_beta
from .construction import SpannerGraph, build_ordered
from .errors import (
    BadEps,
    BetaRealizationFailure,
    ConstructionFailure,
    InvalidConeCount,
    InvalidFamily,
    NotATower,
    ResampleBudgetExceeded,
)
from .geometry import ConeSystem, Point, canonical_triangle, check_general_position, dist, unit
from .metrics import shortest_path

DEFAULT_EPS = 1e-6
JITTER_FRACTION = 0.01
BETA_TOL = 1e-6
RESAMPLE_BUDGET = 10**6
# Offsets in the six-point configuration are chained so that each one
# dominates the previous by this factor.
_MARGIN = 4.0
# largest offset allowed in a six-point configuration, relative to |v1 w|
MAX_SPREAD = 0.01


@dataclass
class GeneratedInstance:
    system: ConeSystem
    points: list[Point]
    order: list[int]
    family: BoundFamily
    labels: list[str]
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.order) != len(self.points) or len(self.labels) != len(self.points):
            raise ValueError("points, order and labels must have equal length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be unique")

    @property
    def m(self) -> int:
        return self.system.m

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def point(self, label: str) -> Point:
        return self.points[self.index(label)]

    def build(self) -> SpannerGraph:
        return build_ordered(self.system, self.points, self.order)


# -- small vector helpers -------------------------------------------------

def _add(p: Point, s: float, d: tuple[float, float]) -> Point:
    return Point(p.x + s * d[0], p.y + s * d[1])


def _toward(p: Point, q: Point, f: float) -> Point:
    return Point(p.x + f * (q.x - p.x), p.y + f * (q.y - p.y))


def _scale(p: Point, c: float) -> Point:
    return Point(p.x * c, p.y * c)


def _centroid(tri) -> Point:
    a, b, c = tri.apex, tri.corner_left, tri.corner_right
    return Point((a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3)


def _near_corner(system: ConeSystem, apex: Point, target: Point, which: str, eps: float) -> Point:
    """Point a fraction ``eps`` of the way from a corner of T(apex, target)
    to the triangle's centroid."""
    tri = canonical_triangle(system, apex, target)
    if which == "left":
        corner = tri.corner_left
    elif which == "right":
        corner = tri.corner_right
    else:
        corner = max((tri.corner_left, tri.corner_right), key=lambda c: c.y)
    return _toward(corner, _centroid(tri), eps)


def _side(origin: Point, direction: tuple[float, float], p: Point) -> float:
    """Signed distance of p from the line through origin; positive is clockwise."""
    return (p.x - origin.x) * direction[1] - (p.y - origin.y) * direction[0]


def _angle_between(a: tuple[float, float], b: tuple[float, float]) -> float:
    cross = a[0] * b[1] - a[1] * b[0]
    dot = a[0] * b[0] + a[1] * b[1]
    return abs(math.atan2(cross, dot))


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not (0.0 < eps <= 1e-3):
        raise BadEps(f"eps must lie in (0, 1e-3], got {eps!r}")
    return eps


def _check_count(name: str, value: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ValueError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


class _Jitter:
    """Seeded uniform jitter of JITTER_FRACTION * eps * sin(theta/2) * scale.

    The sin(theta/2) factor matches the angular room an eps-offset toward
    a triangle's centroid actually buys, which shrinks with the aperture.
    """

    def __init__(self, seed: int, eps: float, theta: float):
        self.rng = np.random.default_rng(seed)
        self.amp = JITTER_FRACTION * eps * math.sin(theta / 2)

    def vector(self, scale: float) -> tuple[float, float]:
        dx, dy = self.rng.uniform(-1.0, 1.0, size=2)
        return (float(dx) * self.amp * scale, float(dy) * self.amp * scale)

    def apply(self, p: Point, scale: float) -> Point:
        return _shift(p, self.vector(scale))


def _shift(p: Point, d: tuple[float, float]) -> Point:
    return Point(p.x + d[0], p.y + d[1])


def _homothety(p: Point, q: Point, p2: Point, q2: Point) -> tuple[float, Point]:
    """Ratio and center of the homothety mapping segment pq onto p2q2."""
    lam = dist(p2, q2) / dist(p, q)
    if not 0.0 < lam < 1.0:
        raise ConstructionFailure(f"staircase step does not contract (ratio {lam!r})")
    center = Point((p2.x - lam * p.x) / (1 - lam), (p2.y - lam * p.y) / (1 - lam))
    image = Point(center.x + lam * (q.x - center.x), center.y + lam * (q.y - center.y))
    if dist(image, q2) > 1e-9 * dist(p2, q2):
        raise ConstructionFailure("staircase step is not a homothety")
    return lam, center


def _finish(
    system: ConeSystem,
    labelled: dict[str, Point],
    order_labels: Sequence[str],
    params: dict[str, Any],
    verify: Optional[Callable[[GeneratedInstance, SpannerGraph], None]] = None,
) -> GeneratedInstance:
    labels = list(labelled)
    index = {lab: i for i, lab in enumerate(labels)}
    inst = GeneratedInstance(
        system=system,
        points=[labelled[lab] for lab in labels],
        order=[index[lab] for lab in order_labels],
        family=classify(system.m),
        labels=labels,
        params=params,
    )
    report = check_general_position(system, inst.points)
    if not report.ok:
        # offsets of size eps * sin(theta/2) fell inside the angular tolerance
        raise BadEps(
            f"eps={params.get('eps')!r} is too small for m={system.m}: generated points violate "
            f"general position {report.violations[:3]}"
        )
    if verify is not None:
        verify(inst, inst.build())
    return inst


def _verify_single_path(inst: GeneratedInstance, graph: SpannerGraph) -> None:
    """Every vertex after the first contributes exactly one edge."""
    owners = [e.owner for e in graph.edges]
    for t, v in enumerate(inst.order):
        expected = 0 if t == 0 else 1
        if owners.count(v) != expected:
            raise ConstructionFailure(
                f"vertex {inst.labels[v]} contributes {owners.count(v)} edges, expected {expected}"
            )


def _verify_zigzag(count: int) -> Callable[[GeneratedInstance, SpannerGraph], None]:
    """The u-w shortest path climbs the odd v's and descends the even ones."""
    expected = [f"v{i}" for i in range(1, count + 1, 2)] + [f"v{i}" for i in range(count - 1, 1, -2)]

    def check(inst: GeneratedInstance, graph: SpannerGraph) -> None:
        path = shortest_path(graph, inst.index("u"), inst.index("w"))
        if path is None:
            raise ConstructionFailure("u and w are disconnected")
        seen = [inst.labels[i] for i in path if inst.labels[i].startswith("v")]
        if seen != expected:
            raise ConstructionFailure(f"u-w path visits {seen}, expected {expected}")

    return check


# -- two-corner staircases (4k+3, 4k+4, 4k+5) -------------------------------

def _two_corner_step(system: ConeSystem, a: Point, b: Point, eps: float) -> tuple[Point, Point]:
    x = _near_corner(system, a, b, "left", eps)
    y = _near_corner(system, b, x, "upper", eps)
    return x, y


def _two_corner_geometry(system: ConeSystem, steps: int, eps: float):
    """Unjittered staircase with its limit point at the origin.

    Returns (u, w, pairs) where pairs[k] = (v_{2k+1}, v_{2k+2})."""
    origin = Point(0.0, 0.0)
    d = unit(system.theta / 2 - eps)  # w - u
    moves: list[tuple[float, float]] = []  # v_{2k+1} - v_{2k-1}, with v_{-1} = u
    spans: list[tuple[float, float]] = []  # v_{2k+2} - v_{2k+1}
    while True:
        s = math.hypot(*d)
        x, y = _two_corner_step(system, origin, Point(d[0] / s, d[1] / s), eps)
        moves.append((x.x * s, x.y * s))
        d = ((y.x - x.x) * s, (y.y - x.y) * s)
        spans.append(d)
        if len(moves) > steps + 4000:
            raise ConstructionFailure("staircase does not converge")
        if len(moves) > steps and (
            math.hypot(*moves[-1]) <= 1e-20 * math.hypot(*moves[steps - 1]) or s < 1e-250
        ):
            break
    # suffix sums give every position relative to the limit point
    tail = [(0.0, 0.0)] * (len(moves) + 1)
    for j in range(len(moves) - 1, -1, -1):
        tail[j] = (tail[j + 1][0] + moves[j][0], tail[j + 1][1] + moves[j][1])
    d0 = unit(system.theta / 2 - eps)
    u = Point(-tail[0][0], -tail[0][1])
    w = Point(u.x + d0[0], u.y + d0[1])
    pairs = []
    for k in range(steps):
        a = Point(-tail[k + 1][0], -tail[k + 1][1])
        pairs.append((a, Point(a.x + spans[k][0], a.y + spans[k][1])))
    return u, w, pairs


def _staircase_beta(system: ConeSystem, eps: float) -> float:
    """Angle at w between the limit point and v1."""
    u, w, pairs = _two_corner_geometry(system, 1, eps)
    v1 = pairs[0][0]
    return _angle_between((-w.x, -w.y), (v1.x - w.x, v1.y - w.y))


def _two_corner_staircase(m: int, steps: int, eps: float, seed: int, verify_beta: bool) -> GeneratedInstance:
    system = ConeSystem(m)
    # beta of the corner rule itself, extrapolated to eps -> 0
    probe = 1e-6
    beta_rule = 2 * _staircase_beta(system, probe / 2) - _staircase_beta(system, probe)
    target = staircase_beta(m)
    if verify_beta and abs(beta_rule - target) > BETA_TOL:
        raise BetaRealizationFailure(f"corner rule realises beta={beta_rule!r}, target {target!r}")

    u, w, pairs = _two_corner_geometry(system, steps, eps)
    jitter = _Jitter(seed, eps, system.theta)
    labelled = {"u": u, "w": w}
    for k, (a, b) in enumerate(pairs):
        span = dist(a, b)
        labelled[f"v{2 * k + 1}"] = jitter.apply(a, span)
        labelled[f"v{2 * k + 2}"] = jitter.apply(b, span)
    order = [f"v{i}" for i in range(2 * steps, 0, -1)] + ["w", "u"]
    v1 = pairs[0][0]
    params = {
        "steps": steps,
        "eps": eps,
        "seed": seed,
        "beta": _angle_between((-w.x, -w.y), (v1.x - w.x, v1.y - w.y)),
        "beta_limit": beta_rule,
    }
    return _finish(system, labelled, order, params, _verify_single_path)


def gen_staircase_4k4(m: int, steps: int, eps: float = DEFAULT_EPS, seed: int = 0) -> GeneratedInstance:
    """Staircase whose ordered build is a single u-w path of length tending to
    the 4k+4 lower bound; 2 + 2*steps points."""
    if not isinstance(m, int) or m < 8 or m % 4 != 0:
        raise InvalidFamily(f"4k+4 staircase needs m = 4k+4 with k >= 1, got {m!r}")
    return _two_corner_staircase(m, _check_count("steps", steps), _check_eps(eps), seed, verify_beta=False)


def gen_staircase_odd(m: int, steps: int, eps: float = DEFAULT_EPS, seed: int = 0) -> GeneratedInstance:
    """4k+3 / 4k+5 staircase; fails loudly unless the realised beta is theta/4
    or 3*theta/4 respectively."""
    if not isinstance(m, int) or m < 7 or m % 4 not in (1, 3):
        raise InvalidFamily(f"odd staircase needs m = 4k+3 or 4k+5 with k >= 1, got {m!r}")
    return _two_corner_staircase(m, _check_count("steps", steps), _check_eps(eps), seed, verify_beta=True)


# -- six-point configurations (4k+2) ------------------------------------------

def _six_point_config(system: ConeSystem, p: Point, q: Point, eps: float) -> dict[str, Point]:
    """One configuration placed against the pair (p, q), where p plays v_{2i-1}
    and q plays w (first configuration) or r_{2i-2}.

    Each offset is chosen to dominate the one it must beat: the tilt of pq,
    then the l offsets, then r1's offset, then r2's."""
    th = system.theta
    s = dist(p, q)
    tilt = (q.y - p.y) / s
    if tilt <= 0:
        raise ConstructionFailure("q must lie above p")
    a1 = _MARGIN * max(tilt, eps) / math.sin(th / 2) * s
    l1 = _add(p, a1, unit(math.pi / 2 - th / 2))
    v2 = _near_corner(system, q, l1, "right", eps)
    # l2 sits just clockwise of the theta/2 ray of p, so it shields v2 from p
    g2 = min(th / 8, math.asin(math.cos(th) / _MARGIN))
    l2 = _add(p, a1, unit(th / 2 + g2))
    gap = _side(l2, unit(th / 2), v2)
    if gap <= 0:
        raise ConstructionFailure("v2 does not lie clockwise of l2's cone 0")
    psi = 0.75 * th
    r1 = _add(v2, _MARGIN * gap / math.sin(psi), unit(math.pi + th / 2 + psi))
    ta = canonical_triangle(system, l1, r1)
    tb = canonical_triangle(system, l2, r1)
    if ta.cone_index != 0 or tb.cone_index != 0:
        raise ConstructionFailure("r1 is not in cone 0 of both l vertices")
    tri = ta if ta.corner_left.x > tb.corner_left.x else tb
    v3 = _toward(tri.corner_left, _centroid(tri), eps)
    dx, dy = (q.x - p.x) / s, (q.y - p.y) / s
    drop = v2.y - v3.y
    back = max(_MARGIN * drop / math.tan(th), _MARGIN * gap / math.cos(th / 2))
    t = (v2.x - v3.x - back) / dx
    r2 = Point(v3.x + t * dx, v3.y + t * dy)
    return {"l1": l1, "v2": v2, "l2": l2, "r1": r1, "v3": v3, "r2": r2}


def gen_staircase_4k2(m: int, reps: int, eps: float = DEFAULT_EPS, seed: int = 0) -> GeneratedInstance:
    """Staircase of six-point configurations; 3 + 6*reps points.

    The jitter of v_{2i+1} and r_{2i} is a single shared vector, so each
    v_{2i+1} r_{2i} stays exactly parallel to v1 w."""
    if not isinstance(m, int) or m < 10 or m % 4 != 2:
        raise InvalidFamily(f"4k+2 staircase needs m = 4k+2 with k >= 2, got {m!r}")
    reps = _check_count("reps", reps)
    eps = _check_eps(eps)
    system = ConeSystem(m)
    u = Point(0.0, 0.0)
    w = Point(*unit(system.theta / 2 - eps))
    v1 = _near_corner(system, u, w, "left", eps)
    try:
        first = _six_point_config(system, v1, w, eps)
        second = _six_point_config(system, first["v3"], first["r2"], eps)
    except ConstructionFailure as exc:
        raise BadEps(f"eps={eps!r} is too large for m={m}: {exc}") from None
    # the chained offsets must stay small against the configuration itself
    spread = dist(first["v2"], first["r2"]) / dist(v1, w)
    if spread > MAX_SPREAD:
        raise BadEps(f"eps={eps!r} is too large for m={m}: offsets reach {spread:.3g} of the step scale")
    lam, x = _homothety(v1, w, first["v3"], first["r2"])
    for key, pt in second.items():
        image = Point(x.x + lam * (first[key].x - x.x), x.y + lam * (first[key].y - x.y))
        if dist(image, pt) > 1e-9 * dist(v1, w):
            raise ConstructionFailure("six-point configuration does not repeat by a homothety")

    rel = {key: Point(pt.x - x.x, pt.y - x.y) for key, pt in first.items()}
    jitter = _Jitter(seed, eps, system.theta)
    span = dist(v1, w)
    labelled = {"u": Point(-x.x, -x.y), "w": Point(w.x - x.x, w.y - x.y), "v1": Point(v1.x - x.x, v1.y - x.y)}
    for i in range(1, reps + 1):
        c = lam ** (i - 1)
        sc = c * span
        shared = jitter.vector(sc)
        labelled[f"l{2 * i - 1}"] = jitter.apply(_scale(rel["l1"], c), sc)
        labelled[f"v{2 * i}"] = jitter.apply(_scale(rel["v2"], c), sc)
        labelled[f"l{2 * i}"] = jitter.apply(_scale(rel["l2"], c), sc)
        labelled[f"r{2 * i - 1}"] = jitter.apply(_scale(rel["r1"], c), sc)
        labelled[f"v{2 * i + 1}"] = _shift(_scale(rel["v3"], c), shared)
        labelled[f"r{2 * i}"] = _shift(_scale(rel["r2"], c), shared)
    order = []
    for i in range(reps, 0, -1):
        order += [f"r{2 * i}", f"r{2 * i - 1}", f"v{2 * i + 1}", f"l{2 * i}", f"l{2 * i - 1}", f"v{2 * i}"]
    order += ["w", "v1", "u"]
    params = {"reps": reps, "eps": eps, "seed": seed, "ratio": lam}
    return _finish(system, labelled, order, params, _verify_zigzag(2 * reps + 1))


# -- towers (3, 4, 5, 6 cones) -----------------------------------------------

# direction of w from u for the stationary two-corner towers; exact
# multiples of theta/4 are degenerate, so w sits eps to the clockwise side
_TOWER_W = {3: -math.pi / 6, 4: 0.0, 5: math.pi / 10}


def _four_point_config(system: ConeSystem, p: Point, q: Point, eps: float) -> dict[str, Point]:
    th = system.theta
    s = dist(p, q)
    tilt = (q.y - p.y) / s
    if tilt <= 0:
        raise ConstructionFailure("q must lie above p")
    l1 = _add(p, _MARGIN * max(tilt, eps) / math.sin(th / 2) * s, unit(math.pi / 2 - th / 2))
    v2 = _near_corner(system, q, l1, "right", eps)
    gap = _side(l1, unit(th / 2), v2)
    if gap <= 0:
        raise ConstructionFailure("v2 does not lie clockwise of l1's cone 0")
    psi = 0.75 * th
    r1 = _add(v2, _MARGIN * gap / math.sin(psi), unit(math.pi + th / 2 + psi))
    v3 = _near_corner(system, l1, r1, "left", eps)
    return {"l": l1, "v2": v2, "r": r1, "v3": v3}


def gen_tower(m: int, n: int, eps: float = DEFAULT_EPS, seed: int = 0) -> GeneratedInstance:
    """Non-converging staircase for 3-6 cones with |uw| = 1.

    For m = 3, 4, 5 ``n`` counts staircase vertices v_1..v_n; for m = 6 it
    counts four-vertex configurations.  Each step is re-derived from the
    previous pair, so the relative configuration does not drift.
    """
    if not isinstance(m, int) or m < 3:
        raise InvalidConeCount(f"cone count must be an integer >= 3, got {m!r}")
    if m >= 7:
        raise NotATower(f"ordered theta_{m}-graphs are spanners; no tower exists")
    n = _check_count("n", n)
    eps = _check_eps(eps)
    system = ConeSystem(m)
    jitter = _Jitter(seed, eps, system.theta)
    u = Point(0.0, 0.0)
    params = {"n": n, "eps": eps, "seed": seed}

    if m == 6:
        w = Point(*unit(system.theta / 2 - eps))
        v1 = _near_corner(system, u, w, "left", eps)
        labelled = {"u": u, "w": w, "v1": v1}
        p, q = v1, w
        for i in range(1, n + 1):
            cfg = _four_point_config(system, p, q, eps)
            sc = dist(p, q)
            labelled[f"l{i}"] = jitter.apply(cfg["l"], sc)
            labelled[f"v{2 * i}"] = jitter.apply(cfg["v2"], sc)
            labelled[f"r{i}"] = jitter.apply(cfg["r"], sc)
            labelled[f"v{2 * i + 1}"] = jitter.apply(cfg["v3"], sc)
            p, q = cfg["v3"], cfg["r"]
        order = []
        for i in range(n, 0, -1):
            order += [f"r{i}", f"v{2 * i + 1}", f"l{i}", f"v{2 * i}"]
        order += ["w", "v1", "u"]
        return _finish(system, labelled, order, params, _verify_zigzag(2 * n + 1))

    w = Point(*unit(_TOWER_W[m] + eps))
    labelled = {"u": u, "w": w}
    a, b = u, w
    placed = []
    while len(placed) < n:
        x = _near_corner(system, a, b, "left", eps)
        placed.append(x)
        if len(placed) == n:
            break
        y = _near_corner(system, b, x, "upper", eps)
        placed.append(y)
        a, b = x, y
    for i, pt in enumerate(placed, start=1):
        labelled[f"v{i}"] = jitter.apply(pt, 1.0)
    order = [f"v{i}" for i in range(n, 0, -1)] + ["w", "u"]
    return _finish(system, labelled, order, params, _verify_single_path)


# -- random instances -----------------------------------------------------------

def gen_random(m: int, n: int, seed: int = 0, box: float = 1.0) -> GeneratedInstance:
    """n uniform points in [0, box]^2 in general position, with a seeded
    random insertion order."""
    system = ConeSystem(m)
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not box > 0:
        raise ValueError(f"box must be positive, got {box!r}")
    rng = np.random.default_rng(seed)
    for _ in range(RESAMPLE_BUDGET):
        xy = rng.uniform(0.0, box, size=(n, 2))
        points = [Point(float(a), float(b)) for a, b in xy]
        if check_general_position(system, points).ok:
            break
    else:
        raise ResampleBudgetExceeded(f"no general-position sample after {RESAMPLE_BUDGET} attempts")
    order = [int(i) for i in rng.permutation(n)]
    labels = [f"p{i}" for i in range(n)]
    return GeneratedInstance(system, points, order, classify(m), labels, {"n": int(n), "seed": seed, "box": box})


__all__ = [
    "DEFAULT_EPS",
    "GeneratedInstance",
    "Family",
    "gen_random",
    "gen_staircase_4k2",
    "gen_staircase_4k4",
    "gen_staircase_odd",
    "gen_tower",
]
