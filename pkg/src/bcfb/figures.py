"""Frontier data for the three example figures and the checks built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import examples as ex
from .geometry import RatePoint, RateRegion, frontier_value, hull_frontier, points_to_csv
from .info import FeedbackBudget
from .search import FAMILIES, Axis, GridSpec, frontier, nofb_regions

FB_RATE = 0.8

# figure id -> (parameter label, values, family, channel params per value, budget)
FIGURE_SPECS = {
    2: ("p1", (0.2, 0.25, 0.3)),
    3: ("e", (0.2, 0.7)),
    4: ("N1", (4, 8)),
}


@dataclass
class Curve:
    stem: str
    label: str
    family: str
    feedback: list[RatePoint]
    nofb: list[RatePoint]
    params: list[dict]


def _setup(fig: int, value: float) -> tuple[str, dict, FeedbackBudget]:
    if fig == 2:
        return "bsbc", {"p1": value, "p2": 0.1}, FeedbackBudget(FB_RATE, 0.0)
    if fig == 3:
        fam = "bscbec1" if value < ex.H(0.1) else "bscbec2"
        return fam, {"p": 0.1, "e": value}, FeedbackBudget(FB_RATE, FB_RATE)
    if fig == 4:
        return "gaussian", {"P": 10.0, "N1": float(value), "N2": 1.0}, FeedbackBudget(FB_RATE, 0.0)
    raise ValueError(f"unknown figure {fig}")


def grid_with_steps(family: str, steps: int | None) -> GridSpec:
    axes = FAMILIES[family].axes
    if steps is not None:
        axes = tuple(replace(a, steps=steps) for a in axes)
    return GridSpec(axes, refine=1)


def nofb_grid(family: str, steps: int = 501) -> GridSpec:
    """Fine sweep of the first axis only; the no-feedback families ignore the rest."""
    first, *rest = FAMILIES[family].axes
    return GridSpec((replace(first, steps=steps),) + tuple(replace(a, steps=1) for a in rest), refine=0)


def convexify(points: Sequence[RatePoint], samples: Sequence[float]) -> list[RatePoint]:
    """Time-sharing closure of a sampled frontier, read back at ``samples``."""
    return hull_frontier([RateRegion.box(p.r1, max(p.r2, 0.0)) for p in points], samples)


def figure_curve(fig: int, value: float, steps: int | None = None, n: int = 201) -> Curve:
    family, cp, budget = _setup(fig, value)
    fb = frontier(family, grid_with_steps(family, steps), cp, budget, n=n)
    base = nofb_regions(family, nofb_grid(family), cp)
    top = max(max(p.r1 for p in fb.points), max(r.max_r1() for r in base))
    samples = [top * k / (n - 1) for k in range(n)]
    label, _ = FIGURE_SPECS[fig]
    return Curve(f"fig{fig}_{label}_{value:g}", f"{label}={value:g}", family,
                 convexify(fb.points, samples), hull_frontier(base, samples), fb.params)


def figure_curves(fig: int, steps: int | None = None) -> list[Curve]:
    _, values = FIGURE_SPECS[fig]
    return [figure_curve(fig, v, steps) for v in values]


def dominance_margin(fb: Sequence[RatePoint], nofb: Sequence[RatePoint]) -> tuple[float, float]:
    """Largest vertical lead (margin, R1) of ``fb`` over ``nofb`` at R1 > 0."""
    best = (-math.inf, 0.0)
    for p in fb:
        if p.r1 <= 0:
            continue
        base = frontier_value(nofb, p.r1)
        lead = p.r2 - (base if base > -math.inf else 0.0)
        if lead > best[0]:
            best = (lead, p.r1)
    return best


def case1_witness(p: float, e: float, s: float, r_fb1: float = FB_RATE,
                  n: int = 25) -> tuple[float, float, float]:
    """Best (min slack, s', gamma) placing the no-feedback boundary point at ``s``
    inside the case-1 feedback region, over log grids of s - s' and gamma."""
    pt = (1 - ex.H(ex.conv(s, p)), (1 - e) * ex.H(s))
    best = (-math.inf, s, 0.0)
    for ds in np.geomspace(1e-7, 0.5 * s, n):
        for g in np.geomspace(1e-5, 0.5, n):
            v = ex.bscbec_case1(ex.BscBecParams(p, e, s=s - ds, gamma=g), r_fb1)
            if not v.feasible:
                continue
            m = min(h.slack(*pt) for h in v.constraints)
            if m > best[0]:
                best = (m, float(s - ds), float(g))
    return best


def gaussian_convergence(N1: float, betas: Sequence[float], P: float = 10.0, N2: float = 1.0,
                         r_fb1: float = FB_RATE, alphas: int = 201, n: int = 401) -> list[float]:
    """Sup gap between the hull frontiers of the feedback family at each beta and of
    the no-feedback family, over a common alpha grid."""
    grid = np.linspace(0.0, 1.0, alphas)
    base = [ex.gaussian_nofb(P, N1, N2, a) for a in grid]
    top = max(r.max_r1() for r in base)
    samples = [top * k / (n - 1) for k in range(n)]
    ref = hull_frontier(base, samples)
    gaps = []
    for beta in betas:
        regs = [v.region for a in grid
                for v in [ex.gaussian_region(ex.GaussianParams(P, N1, N2, a, beta), r_fb1)] if v.feasible]
        cur = hull_frontier(regs, samples)
        gaps.append(max(abs(x.r2 - y.r2) for x, y in zip(cur, ref)))
    return gaps


def write_figure(fig: int, out_dir: Path, steps: int | None = None) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    plots = []
    for c in figure_curves(fig, steps):
        for suffix, pts, title in (("", c.feedback, f"feedback {c.label}"),
                                   ("_nofb", c.nofb, f"no feedback {c.label}")):
            path = out_dir / f"{c.stem}{suffix}.csv"
            path.write_text(points_to_csv(pts))
            written.append(path)
            dash = "dt 2" if suffix else "dt 1"
            plots.append(f"'{path.name}' using 1:2 with lines {dash} title '{title}'")
    script = out_dir / f"fig{fig}.gp"
    script.write_text(
        "set datafile separator ','\n"
        "set key autotitle columnhead bottom left\n"
        "set xlabel 'R1 [bits]'\nset ylabel 'R2 [bits]'\n"
        f"set terminal pngcairo size 800,600\nset output 'fig{fig}.png'\n"
        "plot " + ", \\\n     ".join(plots) + "\n")
    written.append(script)
    return written
