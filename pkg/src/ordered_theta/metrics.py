"""Shortest paths, spanning ratio, and the per-pair path-bound certificate."""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .bounds import theorem_bound_factor
from .construction import SpannerGraph, validate_order
from .errors import TooLarge, WrongFamily
from .geometry import ConeSystem, canonical_triangle, dist

WITNESS_TOL = 1e-12
ORACLE_MAX_N = 512


class PairRow(NamedTuple):
    u: int
    w: int
    delta: float
    euclid: float
    ratio: float


@dataclass
class StretchReport:
    max_stretch: float
    witness: Optional[tuple[int, int]]
    disconnected: bool = False
    per_pair: Optional[list[PairRow]] = field(default=None, repr=False)


class CertificateRow(NamedTuple):
    u: int
    w: int
    bound: float
    delta: float
    passed: bool


def _check_vertex(graph: SpannerGraph, v: int) -> None:
    if not 0 <= v < graph.n:
        raise IndexError(f"vertex {v} out of range for a graph on {graph.n} vertices")


def single_source(graph: SpannerGraph, source: int) -> list[float]:
    """Dijkstra distances from ``source``; unreachable vertices get inf."""
    adj = graph.adjacency
    out = [math.inf] * graph.n
    out[source] = 0.0
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > out[v]:
            continue
        for nb, w in adj[v]:
            nd = d + w
            if nd < out[nb]:
                out[nb] = nd
                heapq.heappush(heap, (nd, nb))
    return out


def shortest_path_distance(graph: SpannerGraph, u: int, w: int) -> float:
    """Graph distance between u and w; ``math.inf`` when unreachable."""
    _check_vertex(graph, u)
    _check_vertex(graph, w)
    return single_source(graph, u)[w]


def shortest_path(graph: SpannerGraph, u: int, w: int) -> Optional[list[int]]:
    """Vertex sequence of one shortest u-w path, or None when unreachable."""
    _check_vertex(graph, u)
    _check_vertex(graph, w)
    adj = graph.adjacency
    best = [math.inf] * graph.n
    prev = [-1] * graph.n
    best[u] = 0.0
    heap = [(0.0, u)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > best[v]:
            continue
        if v == w:
            break
        for nb, wt in adj[v]:
            if d + wt < best[nb]:
                best[nb] = d + wt
                prev[nb] = v
                heapq.heappush(heap, (d + wt, nb))
    if math.isinf(best[w]):
        return None
    path = [w]
    while path[-1] != u:
        path.append(prev[path[-1]])
    return path[::-1]


def _report(graph: SpannerGraph, dmat: np.ndarray, per_pair: bool) -> StretchReport:
    n = graph.n
    if n < 2:
        raise ValueError("stretch needs at least two vertices")
    xy = np.array([(p.x, p.y) for p in graph.points])
    iu, ju = np.triu_indices(n, k=1)
    euclid = np.hypot(xy[ju, 0] - xy[iu, 0], xy[ju, 1] - xy[iu, 1])
    delta = dmat[iu, ju]
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = delta / euclid
    finite = np.isfinite(ratio)
    disconnected = not bool(finite.all())
    if finite.any():
        top = float(ratio[finite].max())
        # triu_indices is already in lexicographic order
        k = int(np.flatnonzero(finite & (ratio >= top - WITNESS_TOL * top))[0])
        witness = (int(iu[k]), int(ju[k]))
    else:
        top, witness = math.nan, None
    rows = None
    if per_pair:
        rows = [
            PairRow(int(a), int(b), float(d), float(e), float(r))
            for a, b, d, e, r in zip(iu, ju, delta, euclid, ratio)
        ]
    return StretchReport(top, witness, disconnected, rows)


def distance_matrix(graph: SpannerGraph, threads: int = 1) -> np.ndarray:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda s: single_source(graph, s), range(graph.n)))
    else:
        rows = [single_source(graph, s) for s in range(graph.n)]
    return np.array(rows, dtype=float).reshape(graph.n, graph.n)


def all_pairs_stretch(graph: SpannerGraph, *, per_pair: bool = False, threads: int = 1) -> StretchReport:
    """Spanning ratio via one Dijkstra run per vertex.

    The witness is the lexicographically smallest pair whose ratio is within
    a relative 1e-12 of the maximum.  Disconnected pairs set ``disconnected``
    and are excluded from the maximum.
    """
    return _report(graph, distance_matrix(graph, threads), per_pair)


def floyd_warshall(graph: SpannerGraph) -> np.ndarray:
    n = graph.n
    d = np.full((n, n), math.inf)
    np.fill_diagonal(d, 0.0)
    for e in graph.edges:
        if e.weight < d[e.u, e.v]:
            d[e.u, e.v] = d[e.v, e.u] = e.weight
    for k in range(n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    return d


def stretch_oracle(graph: SpannerGraph, *, per_pair: bool = False) -> StretchReport:
    """Same contract as :func:`all_pairs_stretch`, computed by Floyd-Warshall."""
    if graph.n > ORACLE_MAX_N:
        raise TooLarge(f"oracle limited to {ORACLE_MAX_N} vertices, got {graph.n}")
    return _report(graph, floyd_warshall(graph), per_pair)


def theorem1_certificate(
    system: ConeSystem,
    graph: SpannerGraph,
    order: Sequence[int],
    *,
    dmat: Optional[np.ndarray] = None,
) -> list[CertificateRow]:
    """Check the 4k+4 path bound for every pair (u, w) with w inserted first.

    The allowed length is factor(alpha) * |uw| plus 1e-9 * |uw| slack, where
    alpha is measured in the canonical triangle of u containing w.
    """
    if system.m % 4 != 0 or system.m < 8:
        raise WrongFamily(f"certificate applies to m = 4k+4 with k >= 1, got m={system.m}")
    order = validate_order(order, graph.n)
    if dmat is None:
        dmat = distance_matrix(graph)
    rank = {v: t for t, v in enumerate(order)}
    rows = []
    for u in range(graph.n):
        for w in range(graph.n):
            if rank[w] >= rank[u]:
                continue
            tri = canonical_triangle(system, graph.points[u], graph.points[w])
            euclid = dist(graph.points[u], graph.points[w])
            bound = theorem_bound_factor(system.theta, tri.alpha) * euclid
            delta = float(dmat[u, w])
            rows.append(CertificateRow(u, w, bound, delta, delta <= bound + 1e-9 * euclid))
    return rows
