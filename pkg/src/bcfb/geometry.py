"""Two-dimensional rate regions as intersections of half-planes in the nonnegative quadrant."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

CONSTRUCTION_TOL = 1e-12
GEOM_TOL = 1e-9
WITNESS_TOL = 1e-6
BOX = 64.0


class Infeasible(ValueError):
    """The region (or projected system) is empty."""


class Unbounded(ValueError):
    """The region is not bounded by its constraints."""


@dataclass(frozen=True)
class HalfPlane:
    """a1 * R1 + a2 * R2 <= b."""

    a1: float
    a2: float
    b: float
    name: str = ""

    def __post_init__(self) -> None:
        if self.a1 == 0 and self.a2 == 0:
            raise ValueError("half-plane needs a nonzero normal")

    def value(self, r1: float, r2: float) -> float:
        return self.a1 * r1 + self.a2 * r2

    def slack(self, r1: float, r2: float) -> float:
        return self.b - self.value(r1, r2)


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float

    def __iter__(self):
        yield self.r1
        yield self.r2


@dataclass(frozen=True)
class RateRegion:
    halfplanes: tuple[HalfPlane, ...] = field(default_factory=tuple)

    def __init__(self, halfplanes: Iterable[HalfPlane] = ()) -> None:
        object.__setattr__(self, "halfplanes", tuple(halfplanes))

    @classmethod
    def box(cls, r1max: float, r2max: float) -> "RateRegion":
        return cls([HalfPlane(1, 0, r1max, "R1"), HalfPlane(0, 1, r2max, "R2")])

    def with_constraints(self, extra: Iterable[HalfPlane]) -> "RateRegion":
        return RateRegion(self.halfplanes + tuple(extra))

    def max_r2(self, r1: float) -> float | None:
        """Largest R2 with (r1, R2) in the region, or None if no such point exists."""
        if r1 < -GEOM_TOL:
            return None
        lo, hi = 0.0, math.inf
        for h in self.halfplanes:
            rest = h.b - h.a1 * r1
            if h.a2 > 0:
                hi = min(hi, rest / h.a2)
            elif h.a2 < 0:
                lo = max(lo, rest / h.a2)
            elif rest < -GEOM_TOL:
                return None
        if hi < lo - GEOM_TOL:
            return None
        if math.isinf(hi):
            raise Unbounded("region is unbounded in R2")
        return max(hi, lo)

    def max_r1(self) -> float:
        return max(p.r1 for p in vertices(self))


def _clip(poly: list[tuple[float, float]], h: HalfPlane) -> list[tuple[float, float]]:
    out: list[tuple[float, float]] = []
    n = len(poly)
    if n == 0:
        return out
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        sp, sq = h.slack(*p), h.slack(*q)
        p_in, q_in = sp >= -CONSTRUCTION_TOL, sq >= -CONSTRUCTION_TOL
        if p_in:
            out.append(p)
        if p_in != q_in:
            t = sp / (sp - sq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _hull(points: Sequence[tuple[float, float]], tol: float = GEOM_TOL) -> list[tuple[float, float]]:
    """Counter-clockwise convex hull without collinear or duplicate points."""
    pts = sorted(set(points))
    uniq: list[tuple[float, float]] = []
    for p in pts:
        if not any(abs(p[0] - u[0]) <= tol and abs(p[1] - u[1]) <= tol for u in uniq):
            uniq.append(p)
    if len(uniq) <= 2:
        return uniq

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[tuple[float, float]] = []
    for p in uniq:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= tol:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(uniq):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= tol:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def vertices(region: RateRegion, box: float = BOX) -> list[RatePoint]:
    """Counter-clockwise vertex list starting from the vertex nearest the origin."""
    poly = [(0.0, 0.0), (box, 0.0), (box, box), (0.0, box)]
    for h in region.halfplanes:
        poly = _clip(poly, h)
        if not poly:
            raise Infeasible("empty intersection of half-planes")
    hull = _hull(poly)
    if not hull:
        raise Infeasible("empty intersection of half-planes")
    if any(p[0] >= box - GEOM_TOL or p[1] >= box - GEOM_TOL for p in hull):
        raise Unbounded(f"region reaches the bounding box [0,{box}]^2")
    start = min(range(len(hull)), key=lambda i: (hull[i][0] + hull[i][1], hull[i][1]))
    hull = hull[start:] + hull[:start]
    return [RatePoint(max(x, 0.0), max(y, 0.0)) for x, y in hull]


def is_feasible(region: RateRegion) -> bool:
    try:
        vertices(region)
    except Infeasible:
        return False
    return True


def contains_point(region: RateRegion, point: RatePoint | tuple[float, float], tol: float = GEOM_TOL) -> bool:
    r1, r2 = point
    if r1 < -tol or r2 < -tol:
        return False
    return all(h.slack(r1, r2) >= -tol for h in region.halfplanes)


def contains_region(outer: RateRegion, inner: RateRegion, tol: float = GEOM_TOL) -> bool:
    vertices(outer)
    return all(contains_point(outer, v, tol) for v in vertices(inner))


def _violation(region: RateRegion, p: RatePoint) -> float:
    worst = max(-p.r1, -p.r2, 0.0)
    for h in region.halfplanes:
        worst = max(worst, -h.slack(p.r1, p.r2))
    return worst


def strict_improvement(a: RateRegion, b: RateRegion) -> RatePoint | None:
    """Vertex of ``a`` lying furthest outside ``b`` (by at least WITNESS_TOL), if any.

    Ties go to the vertex with the larger sum rate.
    """
    vertices(b)  # raises Infeasible for an empty baseline
    best: tuple[float, float] | None = None
    best_pt = None
    for v in vertices(a):
        key = (round(_violation(b, v), 12), v.r1 + v.r2)
        if best is None or key > best:
            best, best_pt = key, v
    if best is None or best[0] < WITNESS_TOL:
        return None
    return best_pt


def hausdorff(a: Sequence[RatePoint], b: Sequence[RatePoint]) -> float:
    """Symmetric Hausdorff distance between two finite point sets."""
    if not a or not b:
        return 0.0 if not a and not b else math.inf
    pa = np.array([[p.r1, p.r2] for p in a])
    pb = np.array([[p.r1, p.r2] for p in b])
    d = np.sqrt(((pa[:, None, :] - pb[None, :, :]) ** 2).sum(axis=2))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def region_hausdorff(a: RateRegion, b: RateRegion) -> float:
    return hausdorff(vertices(a), vertices(b))


def supporting_region(points: Sequence[RatePoint]) -> RateRegion:
    """Region bounded by the edges of a counter-clockwise convex polygon."""
    hs = []
    n = len(points)
    for i in range(n):
        p, q = points[i], points[(i + 1) % n]
        # interior lies to the left of p->q
        a1, a2 = (q.r2 - p.r2), -(q.r1 - p.r1)
        if abs(a1) < CONSTRUCTION_TOL and abs(a2) < CONSTRUCTION_TOL:
            continue
        hs.append(HalfPlane(a1, a2, a1 * p.r1 + a2 * p.r2))
    return RateRegion(hs)


def default_grid(regions: Sequence[RateRegion], n: int = 201) -> list[float]:
    top = 0.0
    for r in regions:
        try:
            top = max(top, r.max_r1())
        except Infeasible:
            continue
    return [top * k / (n - 1) for k in range(n)]


def frontier_union(regions: Sequence[RateRegion], grid: Sequence[float] | None = None,
                   n: int = 201) -> list[RatePoint]:
    """Upper-right Pareto frontier of a union of regions sampled at R1 values ``grid``."""
    if not regions:
        raise ValueError("need at least one region")
    feasible = [r for r in regions if is_feasible(r)]
    if not feasible:
        raise Infeasible("all regions are infeasible")
    if grid is None:
        grid = default_grid(feasible, n)
    grid = sorted(set(float(g) for g in grid))
    best = []
    for r1 in grid:
        vals = [m for m in (reg.max_r2(r1) for reg in feasible) if m is not None]
        best.append(max(vals) if vals else -math.inf)
    # Pareto: a sample is dominated by anything achievable at a larger R1
    out: list[RatePoint] = []
    running = -math.inf
    for r1, v in zip(reversed(grid), reversed(best)):
        running = max(running, v)
        if running > -math.inf:
            out.append(RatePoint(r1, running))
    out.reverse()
    return out


def hull_frontier(regions: Sequence[RateRegion], grid: Sequence[float] | None = None,
                  n: int = 201) -> list[RatePoint]:
    """Upper boundary of the convex hull of a union of regions (time sharing allowed)."""
    feasible = [r for r in regions if is_feasible(r)]
    if not feasible:
        raise Infeasible("all regions are infeasible")
    best: dict[float, float] = {}
    for r in feasible:
        for v in vertices(r):
            best[v.r1] = max(best.get(v.r1, -math.inf), v.r2)
    pts = sorted(best.items())
    top = pts[-1][0]
    if grid is None:
        grid = [top * k / (n - 1) for k in range(n)]
    # upper hull from left to right; a final max keeps the frontier Pareto
    upper: list[tuple[float, float]] = []
    for p in pts:
        while len(upper) >= 2:
            o, a = upper[-2], upper[-1]
            if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) >= 0:
                upper.pop()
            else:
                break
        upper.append(p)
    xs = [p[0] for p in upper]
    ys = [p[1] for p in upper]
    out = []
    for r1 in sorted(set(float(g) for g in grid)):
        if r1 > top + GEOM_TOL:
            continue
        out.append(RatePoint(r1, float(np.interp(r1, xs, ys))))
    return out


def hull_region(regions: Sequence[RateRegion]) -> RateRegion:
    """Convex hull of a union of regions as a half-plane region."""
    feasible = [r for r in regions if is_feasible(r)]
    if not feasible:
        raise Infeasible("all regions are infeasible")
    pts = [(v.r1, v.r2) for r in feasible for v in vertices(r)]
    hull = _hull(pts)
    region = supporting_region([RatePoint(x, y) for x, y in hull])
    # a point or segment hull has no area; the coordinate bounds close it
    return region.with_constraints([HalfPlane(1, 0, max(x for x, _ in pts), "hull-r1"),
                                    HalfPlane(0, 1, max(y for _, y in pts), "hull-r2")])


def frontier_value(frontier: Sequence[RatePoint], r1: float) -> float:
    """Linear interpolation of a sampled frontier; -inf beyond its R1 range."""
    xs = [p.r1 for p in frontier]
    if r1 < xs[0] - GEOM_TOL or r1 > xs[-1] + GEOM_TOL:
        return -math.inf
    return float(np.interp(r1, xs, [p.r2 for p in frontier]))


def format_number(x: float) -> str:
    return f"{x:.12g}"


def points_to_csv(points: Iterable[RatePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r1", "r2"])
    for p in points:
        w.writerow([format_number(p.r1), format_number(p.r2)])
    return buf.getvalue()


def region_to_dict(region: RateRegion) -> dict:
    return {
        "constraints": [{"name": h.name, "a1": h.a1, "a2": h.a2, "b": h.b} for h in region.halfplanes],
        "vertices": [[p.r1, p.r2] for p in vertices(region)],
    }
