"""Command-line front end: generate, measure, bounds, render.

Exit codes: 0 pass, 1 check failure, 2 usage or parse error, 3 invalid
instance (generator refusal or general-position violation), 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from . import bounds
from .construction import SpannerGraph, build_ordered, build_unordered
from .errors import GeneralPositionViolation, ThetaError, TooLarge, WrongFamily
from .generators import (
    DEFAULT_EPS,
    GeneratedInstance,
    gen_random,
    gen_staircase_4k2,
    gen_staircase_4k4,
    gen_staircase_odd,
    gen_tower,
)
from .geometry import ConeSystem, Point, unit
from .metrics import all_pairs_stretch, distance_matrix, stretch_oracle, theorem1_certificate, _report

FORMAT_VERSION = "1"
EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3, 4
PX_PER_UNIT = 400.0
ORACLE_TOL = 1e-9
BOUND_SLACK = 1e-9


class FormatError(ValueError):
    """Malformed instance file."""


def _num(x: float) -> Optional[float]:
    # JSON has no inf/nan; unreachable or undefined values become null
    return float(x) if math.isfinite(x) else None


@dataclass
class InstanceFile:
    m: int
    labels: list[str]
    points: list[Point]
    order: list[str]
    family: Optional[dict[str, Any]] = None

    @classmethod
    def from_generated(cls, inst: GeneratedInstance) -> "InstanceFile":
        fam = {"name": inst.family.family.value, "k": inst.family.k, "params": dict(inst.params)}
        return cls(inst.m, list(inst.labels), list(inst.points), [inst.labels[i] for i in inst.order], fam)

    @property
    def system(self) -> ConeSystem:
        return ConeSystem(self.m)

    def order_indices(self) -> list[int]:
        index = {lab: i for i, lab in enumerate(self.labels)}
        return [index[lab] for lab in self.order]

    def to_dict(self) -> dict[str, Any]:
        return {
            "version": FORMAT_VERSION,
            "m": self.m,
            "points": [{"label": lab, "x": p.x, "y": p.y} for lab, p in zip(self.labels, self.points)],
            "order": list(self.order),
            "family": self.family,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, data: Any) -> "InstanceFile":
        if not isinstance(data, dict):
            raise FormatError("instance must be a JSON object")
        if data.get("version") != FORMAT_VERSION:
            raise FormatError(f"unsupported version {data.get('version')!r}")
        m = data.get("m")
        if isinstance(m, bool) or not isinstance(m, int) or m < 3:
            raise FormatError(f"m must be an integer >= 3, got {m!r}")
        raw = data.get("points")
        if not isinstance(raw, list):
            raise FormatError("points must be a list")
        labels, points = [], []
        for entry in raw:
            if not isinstance(entry, dict) or not isinstance(entry.get("label"), str):
                raise FormatError(f"bad point entry {entry!r}")
            x, y = entry.get("x"), entry.get("y")
            if any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in (x, y)):
                raise FormatError(f"point {entry['label']!r} needs numeric x and y")
            try:
                points.append(Point(float(x), float(y)))
            except ValueError as exc:
                raise FormatError(str(exc)) from None
            labels.append(entry["label"])
        if len(set(labels)) != len(labels):
            raise FormatError("point labels must be unique")
        order = data.get("order")
        if not isinstance(order, list) or sorted(map(str, order)) != sorted(labels) or len(order) != len(labels):
            raise FormatError("order must list every point label exactly once")
        family = data.get("family")
        if family is not None and not isinstance(family, dict):
            raise FormatError("family must be an object or null")
        return cls(m, labels, points, [str(o) for o in order], family)

    @classmethod
    def loads(cls, text: str) -> "InstanceFile":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)


# -- generate ---------------------------------------------------------------

def generate_instance(
    m: int,
    *,
    count: Optional[int] = None,
    eps: float = DEFAULT_EPS,
    seed: int = 0,
    random: bool = False,
    box: float = 1.0,
) -> GeneratedInstance:
    """Dispatch to the generator for m's family (or the random generator)."""
    if random:
        return gen_random(m, 100 if count is None else count, seed, box)
    fam = bounds.classify(m).family
    count = 10 if count is None else count
    if fam is bounds.Family.NON_SPANNER:
        return gen_tower(m, count, eps, seed)
    if fam is bounds.Family.F4K4:
        return gen_staircase_4k4(m, count, eps, seed)
    if fam is bounds.Family.F4K2:
        return gen_staircase_4k2(m, count, eps, seed)
    return gen_staircase_odd(m, count, eps, seed)


# -- measure ----------------------------------------------------------------

def measure(
    inst: InstanceFile,
    *,
    mode: str = "ordered",
    per_pair: bool = False,
    certificate: bool = False,
    oracle: bool = False,
    threads: int = 1,
) -> dict[str, Any]:
    """Build the graph, measure it, and collect the requested checks.

    Raises GeneralPositionViolation for inputs outside general position and
    ValueError for instances with fewer than two points.
    """
    system = inst.system
    if len(inst.points) < 2:
        raise ValueError("stretch needs at least two points")
    order = inst.order_indices()
    if mode == "ordered":
        graph = build_ordered(system, inst.points, order)
    else:
        graph = build_unordered(system, inst.points)
    dmat = distance_matrix(graph, threads)
    rep = _report(graph, dmat, per_pair)
    upper, lower = bounds.upper_bound(inst.m), bounds.lower_bound(inst.m)
    fam = bounds.classify(inst.m)
    checks = []

    if mode != "ordered":
        checks.append({"name": "upper_bound", "pass": True, "detail": "skipped: bounds apply to ordered builds"})
    elif upper is None:
        checks.append(
            {"name": "upper_bound", "pass": True, "detail": f"no constant bound: {fam.family.value} family (m={inst.m})"}
        )
    else:
        ok = rep.max_stretch <= upper + BOUND_SLACK
        checks.append(
            {"name": "upper_bound", "pass": bool(ok), "detail": f"stretch {rep.max_stretch!r} vs upper {upper!r}"}
        )

    if certificate:
        if mode != "ordered":
            checks.append({"name": "certificate", "pass": True, "detail": "skipped: requires an ordered build"})
        else:
            try:
                rows = theorem1_certificate(system, graph, order, dmat=dmat)
            except WrongFamily as exc:
                checks.append({"name": "certificate", "pass": True, "detail": f"skipped: {exc}"})
            else:
                good = sum(r.passed for r in rows)
                checks.append(
                    {"name": "certificate", "pass": good == len(rows), "detail": f"{good}/{len(rows)} pairs within bound"}
                )

    if oracle:
        ref = stretch_oracle(graph)
        same = rep.witness == ref.witness and (
            (math.isnan(rep.max_stretch) and math.isnan(ref.max_stretch))
            or abs(rep.max_stretch - ref.max_stretch) <= ORACLE_TOL
        )
        checks.append(
            {
                "name": "oracle",
                "pass": bool(same),
                "detail": f"dijkstra {rep.max_stretch!r} {rep.witness} vs matrix {ref.max_stretch!r} {ref.witness}",
            }
        )

    lab = inst.labels
    report: dict[str, Any] = {
        "m": inst.m,
        "mode": mode,
        "max_stretch": _num(rep.max_stretch),
        "witness": None if rep.witness is None else [lab[rep.witness[0]], lab[rep.witness[1]]],
        "disconnected": rep.disconnected,
        "edges": len(graph.edges),
        "upper_bound": upper,
        "lower_bound": lower,
        "checks": checks,
    }
    if per_pair:
        report["per_pair"] = [
            {"u": lab[r.u], "w": lab[r.w], "delta": _num(r.delta), "euclid": r.euclid, "ratio": _num(r.ratio)}
            for r in rep.per_pair
        ]
    return report


def per_pair_csv(report: dict[str, Any]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["u", "w", "delta", "euclid", "ratio"])
    for row in report.get("per_pair", []):
        writer.writerow([row["u"], row["w"], _csv_num(row["delta"]), _csv_num(row["euclid"]), _csv_num(row["ratio"])])
    return buf.getvalue()


def _csv_num(x: Optional[float]) -> str:
    return "inf" if x is None else repr(x)


# -- bounds -------------------------------------------------------------------

def bounds_rows(ms: Sequence[int]) -> list[dict[str, Any]]:
    rows = []
    for m in ms:
        fam = bounds.classify(m)
        up, lo = bounds.upper_bound(m), bounds.lower_bound(m)
        if fam.family is bounds.Family.NON_SPANNER:
            status = "non-spanner"
        else:
            status = "tight" if bounds.is_tight(m) else "open"
        rows.append(
            {"m": m, "family": fam.family.value, "k": fam.k, "theta": 2 * math.pi / m, "upper": up, "lower": lo, "status": status}
        )
    return rows


def format_bounds(rows: list[dict[str, Any]], fmt: str) -> str:
    def cell(v: Any) -> str:
        if v is None:
            return "none"
        if isinstance(v, float):
            return f"{v:.7f}"
        return str(v)

    header = ["m", "family", "k", "theta", "upper", "lower", "status"]
    table = [[cell(r[h]) for h in header] for r in rows]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(table)
        return buf.getvalue()
    widths = [max(len(h), *(len(t[i]) for t in table)) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(t, widths)) for t in table]
    return "\n".join(line.rstrip() for line in lines) + "\n"


# -- render -------------------------------------------------------------------

def render_svg(inst: InstanceFile, graph: Optional[SpannerGraph], cones_at: Optional[str] = None) -> str:
    """Deterministic SVG; one coordinate unit (|uw| for generated instances)
    is PX_PER_UNIT pixels and y points up."""
    margin = 40.0
    xs = [p.x for p in inst.points] or [0.0]
    ys = [p.y for p in inst.points] or [0.0]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    width = max((x1 - x0) * PX_PER_UNIT + 2 * margin, 2 * margin)
    height = max((y1 - y0) * PX_PER_UNIT + 2 * margin, 2 * margin)

    def px(p: Point) -> tuple[str, str]:
        return f"{(p.x - x0) * PX_PER_UNIT + margin:.3f}", f"{(y1 - p.y) * PX_PER_UNIT + margin:.3f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3f}" height="{height:.3f}" '
        f'viewBox="0 0 {width:.3f} {height:.3f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    if cones_at is not None:
        apex = inst.points[inst.labels.index(cones_at)]
        reach = math.hypot(width, height) / PX_PER_UNIT
        ax, ay = px(apex)
        for phi in ConeSystem(inst.m).boundary_directions():
            d = unit(phi)
            bx, by = px(Point(apex.x + reach * d[0], apex.y + reach * d[1]))
            out.append(f'<line class="ray" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="#bbbbbb" stroke-dasharray="4 3"/>')
    if graph is not None:
        for e in graph.edges:
            (ax, ay), (bx, by) = px(graph.points[e.u]), px(graph.points[e.v])
            out.append(f'<line class="edge" x1="{ax}" y1="{ay}" x2="{bx}" y2="{by}" stroke="black" stroke-width="1"/>')
    for lab, p in zip(inst.labels, inst.points):
        cx, cy = px(p)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="#1f4e9a"/>')
        out.append(f'<text x="{cx}" y="{cy}" dx="5" dy="-5" font-size="11" font-family="sans-serif">{_escape(lab)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


# -- argument parsing ---------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordered-theta", description="Ordered theta-graph spanner toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an adversarial or random instance")
    g.add_argument("--m", type=int, required=True, help="cone count")
    g.add_argument("--steps", type=int, help="staircase steps (4k+3, 4k+4, 4k+5)")
    g.add_argument("--reps", type=int, help="six-point configurations (4k+2)")
    g.add_argument("--n", type=int, help="tower size (3-6 cones) or random point count")
    g.add_argument("--eps", type=float, default=DEFAULT_EPS)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--family", choices=[f.value for f in bounds.Family], help="must match the family of --m")
    g.add_argument("--random", action="store_true", help="uniform random points instead of a construction")
    g.add_argument("--box", type=float, default=1.0, help="side of the sampling square for --random")
    g.add_argument("--out", help="output path (default: stdout)")

    ms = sub.add_parser("measure", help="build a graph from an instance and report its stretch")
    ms.add_argument("instance")
    mode = ms.add_mutually_exclusive_group()
    mode.add_argument("--ordered", dest="mode", action="store_const", const="ordered")
    mode.add_argument("--unordered", dest="mode", action="store_const", const="unordered")
    ms.add_argument("--per-pair", action="store_true")
    ms.add_argument("--csv", help="also write the per-pair table as CSV to this path")
    ms.add_argument("--certificate", action="store_true", help="per-pair path bound check (m = 4k+4)")
    ms.add_argument("--oracle", action="store_true", help="cross-check against the matrix algorithm")
    ms.add_argument("--threads", type=int, default=1)
    ms.add_argument("--out", help="output path (default: stdout)")

    b = sub.add_parser("bounds", help="print upper and lower bounds per cone count")
    sel = b.add_mutually_exclusive_group(required=True)
    sel.add_argument("--m", type=int)
    sel.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"))
    b.add_argument("--format", choices=["text", "csv"], default="text")

    r = sub.add_parser("render", help="draw an instance and its graph as SVG")
    r.add_argument("instance")
    r.add_argument("--graph", choices=["ordered", "unordered", "none"], default="ordered")
    r.add_argument("--cones-at", metavar="LABEL", help="draw the cone boundary rays of this vertex")
    r.add_argument("--out", required=True)
    return p


def _fail(code: int, msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _write(path: Optional[str], text: str) -> int:
    if path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write {path}: {exc}")
    return EXIT_OK


def _read_instance(path: str) -> InstanceFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    return InstanceFile.loads(text)


def _cmd_generate(args) -> int:
    counts = [c for c in (args.steps, args.reps, args.n) if c is not None]
    if len(counts) > 1:
        return _fail(EXIT_USAGE, "give at most one of --steps, --reps, --n")
    if args.m < 3:
        return _fail(EXIT_USAGE, f"--m must be at least 3, got {args.m}")
    if args.family is not None and not args.random and args.family != bounds.classify(args.m).family.value:
        return _fail(EXIT_USAGE, f"--family {args.family} does not match m={args.m}")
    try:
        inst = generate_instance(
            args.m, count=counts[0] if counts else None, eps=args.eps, seed=args.seed, random=args.random, box=args.box
        )
    except (ThetaError, ValueError) as exc:
        return _fail(EXIT_INVALID, f"{type(exc).__name__}: {exc}")
    return _write(args.out, InstanceFile.from_generated(inst).dumps())


def _cmd_measure(args) -> int:
    try:
        inst = _read_instance(args.instance)
    except FormatError as exc:
        return _fail(EXIT_USAGE, str(exc))
    if args.threads < 1:
        return _fail(EXIT_USAGE, "--threads must be positive")
    try:
        report = measure(
            inst,
            mode=args.mode or "ordered",
            per_pair=args.per_pair or args.csv is not None,
            certificate=args.certificate,
            oracle=args.oracle,
            threads=args.threads,
        )
    except GeneralPositionViolation as exc:
        lab = inst.labels
        body = {
            "error": "general position violated",
            "violations": [{"u": lab[i], "w": lab[j], "kind": k} for i, j, k in exc.report.violations],
        }
        _write(args.out, json.dumps(body, indent=2) + "\n")
        return _fail(EXIT_INVALID, str(exc))
    except TooLarge as exc:
        return _fail(EXIT_USAGE, str(exc))
    except (ThetaError, ValueError) as exc:
        return _fail(EXIT_INVALID, f"{type(exc).__name__}: {exc}")
    if args.csv is not None:
        code = _write(args.csv, per_pair_csv(report))
        if code:
            return code
        if not args.per_pair:
            del report["per_pair"]
    code = _write(args.out, json.dumps(report, indent=2, allow_nan=False) + "\n")
    if code:
        return code
    return EXIT_OK if all(c["pass"] for c in report["checks"]) else EXIT_CHECK


def _cmd_bounds(args) -> int:
    if args.m is not None:
        ms = [args.m]
    else:
        lo, hi = args.range
        if hi < lo:
            return _fail(EXIT_USAGE, "--range needs LO <= HI")
        ms = list(range(lo, hi + 1))
    if min(ms) < 3:
        return _fail(EXIT_USAGE, "cone count must be at least 3")
    return _write(None, format_bounds(bounds_rows(ms), args.format))


def _cmd_render(args) -> int:
    try:
        inst = _read_instance(args.instance)
    except FormatError as exc:
        return _fail(EXIT_USAGE, str(exc))
    if args.cones_at is not None and args.cones_at not in inst.labels:
        return _fail(EXIT_USAGE, f"no vertex labelled {args.cones_at!r}")
    graph = None
    try:
        if args.graph == "ordered":
            graph = build_ordered(inst.system, inst.points, inst.order_indices())
        elif args.graph == "unordered":
            graph = build_unordered(inst.system, inst.points)
    except ThetaError as exc:
        return _fail(EXIT_INVALID, str(exc))
    return _write(args.out, render_svg(inst, graph, args.cones_at))


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = {"generate": _cmd_generate, "measure": _cmd_measure, "bounds": _cmd_bounds, "render": _cmd_render}
    return handler[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
