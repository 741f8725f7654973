"""Grid frontiers over auxiliary families, the feedback-usefulness certificate,
and the Blackwell-channel optimizer."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from . import examples as ex
from .geometry import (GEOM_TOL, WITNESS_TOL, HalfPlane, Infeasible, RatePoint, RateRegion,
                       contains_point, frontier_union, hull_frontier, hull_region, is_feasible,
                       vertices)
from .info import (BroadcastChannel, DomainError, FeedbackBudget, JointPmf, SchemeSpec,
                   TestChannel, TwoAuxSpec, assemble_joint, assemble_twoaux, conditional_entropy,
                   mutual_info)
from .regions import RegionVerdict, marton, superposition_scheme, thm2_region, thm3_region


# ---------------------------------------------------------------------------
# Grids and frontiers


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    steps: int
    log: bool = False

    def __post_init__(self) -> None:
        if self.steps < 1:
            raise DomainError(f"axis {self.name}: steps must be positive")
        if self.hi < self.lo:
            raise DomainError(f"axis {self.name}: empty range")
        if self.log and self.lo <= 0:
            raise DomainError(f"axis {self.name}: log axis needs a positive range")

    def values(self) -> list[float]:
        if self.steps == 1:
            return [self.lo]
        if self.log:
            return [float(v) for v in np.geomspace(self.lo, self.hi, self.steps)]
        return [float(v) for v in np.linspace(self.lo, self.hi, self.steps)]

    def step(self) -> float:
        if self.steps == 1:
            return 0.0
        if self.log:
            return (math.log(self.hi) - math.log(self.lo)) / (self.steps - 1)
        return (self.hi - self.lo) / (self.steps - 1)

    def around(self, v: float, step: float) -> list[float]:
        if self.log:
            cand = [v * math.exp(-step), v, v * math.exp(step)]
        else:
            cand = [v - step, v, v + step]
        return sorted({min(max(c, self.lo), self.hi) for c in cand})


@dataclass(frozen=True)
class GridSpec:
    axes: tuple[Axis, ...]
    refine: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "axes", tuple(self.axes))
        if self.refine < 0:
            raise DomainError("refinement depth must be nonnegative")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise DomainError("axis names must be unique")

    def points(self) -> list[dict[str, float]]:
        names = [a.name for a in self.axes]
        return [dict(zip(names, combo)) for combo in itertools.product(*(a.values() for a in self.axes))]


@dataclass(frozen=True)
class Family:
    """Region evaluator over named parameters plus its no-feedback counterpart."""

    axes: tuple[Axis, ...]
    evaluate: Callable[[Mapping[str, float], Mapping, FeedbackBudget], RegionVerdict]
    nofb: Callable[[Mapping[str, float], Mapping], RateRegion]


def _bsbc(pt, cp, b):
    return ex.bsbc_region(ex.BsbcParams(cp["p1"], cp["p2"], pt["beta1"], pt["beta2"]), b.r_fb1)


def _bscbec1(pt, cp, b):
    return ex.bscbec_case1(ex.BscBecParams(cp["p"], cp["e"], s=pt["s"], gamma=pt["gamma"]), b.r_fb1)


def _bscbec2(pt, cp, b):
    return ex.bscbec_case2(ex.BscBecParams(cp["p"], cp["e"], alpha=pt["alpha"], gamma=pt["gamma"]), b.r_fb2)


def _gauss(pt, cp, b):
    return ex.gaussian_region(ex.GaussianParams(cp["P"], cp["N1"], cp["N2"], pt["alpha"], pt["beta"]), b.r_fb1)


def _generic_scheme(pt: Mapping[str, float], channel: BroadcastChannel, with_tests: bool) -> SchemeSpec:
    if channel.x_size != 2:
        raise DomainError("the small-alphabet family needs a binary input")
    a = pt["a"]
    twoaux = TwoAuxSpec.from_u([1 - a, a], [[1 - pt["b0"], pt["b0"]], [1 - pt["b1"], pt["b1"]]])
    base = superposition_scheme(twoaux)
    if not with_tests:
        return base
    return SchemeSpec(base.q_pmf, base.aux_pmf, base.symbol_map,
                      TestChannel.erasure(1, channel.y1_size, pt["k1"]),
                      TestChannel.erasure(1, channel.y2_size, pt["k2"]))


def _generic(pt, cp, b):
    ch = cp["channel"]
    return thm2_region(assemble_joint(_generic_scheme(pt, ch, True), ch), b)


def _generic_nofb(pt, cp):
    ch = cp["channel"]
    return marton(assemble_joint(_generic_scheme(pt, ch, False), ch))


FAMILIES: dict[str, Family] = {
    "bsbc": Family(
        (Axis("beta1", 0.0, 0.5, 26), Axis("beta2", 0.0, 0.5, 26)), _bsbc,
        lambda pt, cp: ex.bsbc_nofb(cp["p1"], cp["p2"], pt["beta1"])),
    "bscbec1": Family(
        (Axis("s", 0.0, 0.5, 26), Axis("gamma", 0.0, 1.0, 21)), _bscbec1,
        lambda pt, cp: ex.bscbec_nofb(ex.BscBecParams(cp["p"], cp["e"], s=pt["s"]))),
    "bscbec2": Family(
        (Axis("alpha", 0.0, 1.0, 21), Axis("gamma", 0.0, 1.0, 21)), _bscbec2,
        lambda pt, cp: ex.bscbec_nofb(ex.BscBecParams(cp["p"], cp["e"], alpha=pt["alpha"]))),
    "gaussian": Family(
        (Axis("alpha", 0.0, 1.0, 41), Axis("beta", 0.01, 1e3, 41, log=True)), _gauss,
        lambda pt, cp: ex.gaussian_nofb(cp["P"], cp["N1"], cp["N2"], pt["alpha"])),
    "generic-thm2-smallalphabet": Family(
        (Axis("a", 0.0, 1.0, 5), Axis("b0", 0.0, 1.0, 5), Axis("b1", 0.0, 1.0, 5),
         Axis("k1", 0.0, 1.0, 3), Axis("k2", 0.0, 1.0, 3)), _generic, _generic_nofb),
}


@dataclass
class FrontierResult:
    points: list[RatePoint]
    params: list[dict[str, float]]
    failures: list[tuple[dict[str, float], str]] = field(default_factory=list)

    def to_csv(self) -> str:
        from .geometry import points_to_csv
        return points_to_csv(self.points)


def default_grid(family: str) -> GridSpec:
    return GridSpec(FAMILIES[family].axes, refine=1)


def _failure_reason(verdict: RegionVerdict) -> str | None:
    bad = [f"{n} ({s:.3g})" for n, s in verdict.feasibility if s < -1e-12]
    if bad:
        return "violated: " + ", ".join(bad)
    if not is_feasible(verdict.constraint_region):
        return "empty region"
    return None


def _pareto(samples: Sequence[float], regions: Sequence[RateRegion],
            tags: Sequence[dict]) -> tuple[list[RatePoint], list[dict]]:
    best_v, best_i = [], []
    for r1 in samples:
        v, idx = -math.inf, -1
        for i, reg in enumerate(regions):
            m = reg.max_r2(r1)
            if m is not None and m > v + 1e-15:
                v, idx = m, i
        best_v.append(v)
        best_i.append(idx)
    pts: list[RatePoint] = []
    arg: list[dict] = []
    run_v, run_i = -math.inf, -1
    for r1, v, i in zip(reversed(samples), reversed(best_v), reversed(best_i)):
        if v > run_v:
            run_v, run_i = v, i
        if run_i >= 0:
            pts.append(RatePoint(r1, run_v))
            arg.append(dict(tags[run_i]))
    pts.reverse()
    arg.reverse()
    return pts, arg


def frontier(family: str, grid: GridSpec | None = None, channel_params: Mapping | None = None,
             budget: FeedbackBudget = FeedbackBudget(), n: int = 201) -> FrontierResult:
    """Pareto frontier of the union of a family's regions over a grid, with local refinement.

    Each refinement level re-samples a halved-step neighbourhood of every
    parameter point that attains the frontier somewhere.
    """
    fam = FAMILIES.get(family)
    if fam is None:
        raise DomainError(f"unknown family {family!r}; known: {sorted(FAMILIES)}")
    grid = grid or default_grid(family)
    cp = dict(channel_params or {})
    seen: dict[tuple, RegionVerdict | None] = {}
    failures: list[tuple[dict[str, float], str]] = []
    regions: list[RateRegion] = []
    tags: list[dict] = []

    def visit(pt: dict[str, float]) -> None:
        key = tuple(sorted(pt.items()))
        if key in seen:
            return
        try:
            verdict = fam.evaluate(pt, cp, budget)
        except DomainError as exc:
            seen[key] = None
            failures.append((pt, f"domain: {exc}"))
            return
        seen[key] = verdict
        reason = _failure_reason(verdict)
        if reason:
            failures.append((pt, reason))
            return
        regions.append(verdict.region)
        tags.append(pt)

    for pt in grid.points():
        visit(pt)
    if not regions:
        raise Infeasible(f"no feasible grid point ({len(failures)} failures, first: {failures[:3]})")

    steps = {a.name: a.step() for a in grid.axes}
    for _ in range(grid.refine):
        steps = {k: v / 2 for k, v in steps.items()}
        top = max(r.max_r1() for r in regions)
        samples = [top * k / (n - 1) for k in range(n)]
        _, arg = _pareto(samples, regions, tags)
        incumbents = sorted({tuple(sorted(a.items())) for a in arg})
        for inc in incumbents:
            base = dict(inc)
            local = [grid_axis.around(base[grid_axis.name], steps[grid_axis.name]) for grid_axis in grid.axes]
            for combo in itertools.product(*local):
                visit(dict(zip((a.name for a in grid.axes), combo)))

    top = max(r.max_r1() for r in regions)
    samples = [top * k / (n - 1) for k in range(n)]
    pts, arg = _pareto(samples, regions, tags)
    return FrontierResult(pts, arg, failures)


def nofb_regions(family: str, grid: GridSpec | None = None,
                 channel_params: Mapping | None = None) -> list[RateRegion]:
    fam = FAMILIES[family]
    grid = grid or default_grid(family)
    cp = dict(channel_params or {})
    out, keys = [], set()
    for pt in grid.points():
        region = fam.nofb(pt, cp)
        key = tuple((h.a1, h.a2, h.b) for h in region.halfplanes)
        if key not in keys:
            keys.add(key)
            out.append(region)
    return out


def nofb_frontier(family: str, grid: GridSpec | None = None, channel_params: Mapping | None = None,
                  samples: Sequence[float] | None = None, n: int = 201, hull: bool = True) -> list[RatePoint]:
    """No-feedback frontier of a family; with ``hull`` the time-sharing closure is taken."""
    regs = nofb_regions(family, grid, channel_params)
    return hull_frontier(regs, samples, n) if hull else frontier_union(regs, samples, n)


# ---------------------------------------------------------------------------
# Feedback-usefulness certificate


class PreconditionFailure(ValueError):
    def __init__(self, name: str, message: str) -> None:
        super().__init__(f"{name}: {message}")
        self.name = name


@dataclass(frozen=True)
class UsefulnessCertificate:
    gamma: float
    gamma_info_bound: float
    gamma_fb_bound: float
    gamma_max: float
    marton_point: RatePoint
    enh_point: RatePoint
    target_point: RatePoint
    constraint_slacks: tuple[tuple[str, float], ...]

    @property
    def passed(self) -> bool:
        return all(s >= -GEOM_TOL for _, s in self.constraint_slacks)

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "gamma_info_bound": self.gamma_info_bound,
            "gamma_fb_bound": self.gamma_fb_bound,
            "gamma_max": self.gamma_max,
            "marton_point": list(self.marton_point),
            "enh_point": list(self.enh_point),
            "target_point": list(self.target_point),
            "constraint_slacks": [{"name": n, "slack": s} for n, s in self.constraint_slacks],
            "pass": self.passed,
        }


def _q(joint: JointPmf, given: str) -> str:
    return (given + " Q").strip() if "Q" in joint.variables else given


def _marton_terms(joint: JointPmf) -> dict[str, float]:
    def I(a, b, g=""):
        return mutual_info(joint, a, b, _q(joint, g))

    i12 = I("U1", "U2", "U0")
    a1, a2 = I("U0 U1", "Y1"), I("U0 U2", "Y2")
    return {
        "A1": a1, "A2": a2,
        "S3": a1 + I("U2", "Y2", "U0") - i12,
        "S4": a2 + I("U1", "Y1", "U0") - i12,
        "Gamma": I("U0", "Y2") - I("U0", "Y1"),
    }


def _enh_terms(twoaux: TwoAuxSpec, channel: BroadcastChannel) -> dict[str, float]:
    j = assemble_twoaux(twoaux, channel)
    return {
        "e1": mutual_info(j, "U", "Y1"),
        "e2": mutual_info(j, "X", "Y1 Y2", "U"),
        "ix": mutual_info(j, "X", "Y1 Y2"),
        "h12": conditional_entropy(j, "Y1", "Y2"),
        "h12x": conditional_entropy(j, "Y1", "Y2 X"),
        "h1u2": conditional_entropy(j, "Y1", "U Y2"),
    }


def usefulness_certificate(marton_scheme: SchemeSpec, marton_point: RatePoint, enh: TwoAuxSpec,
                           enh_point: RatePoint, channel: BroadcastChannel, gamma: float,
                           r_fb1: float) -> UsefulnessCertificate:
    """Check that the mixture (1-gamma)*marton_point + gamma*enh_point lies in the
    hybrid feedback region of the time-shared scheme.

    Raises PreconditionFailure named "gamma-gap" when I(U0;Y2) - I(U0;Y1) <= 0,
    "strictness" when marton_point meets the receiver-2 Marton bound with equality,
    and "marton-point" / "enh-point" when an input point lies outside its region.
    """
    if not 0 < gamma < 1:
        raise DomainError("gamma must lie in (0, 1)")
    if r_fb1 < 0:
        raise DomainError("feedback rate must be nonnegative")
    jm = assemble_joint(marton_scheme, channel)
    m = _marton_terms(jm)
    e = _enh_terms(enh, channel)
    if m["Gamma"] <= 1e-12:
        raise PreconditionFailure("gamma-gap", f"I(U0;Y2)-I(U0;Y1) = {m['Gamma']:.3g} is not positive")
    if not contains_point(marton(jm), marton_point):
        raise PreconditionFailure("marton-point", "point violates the Marton constraints")
    if marton_point.r2 >= m["A2"] - 1e-12:
        raise PreconditionFailure("strictness", "receiver-2 Marton constraint holds with equality")
    if not (enh_point.r1 <= e["e1"] + GEOM_TOL and enh_point.r2 <= e["e2"] + GEOM_TOL):
        raise PreconditionFailure("enh-point", "point lies outside the enhanced-receiver region")

    (m1, m2), (n1, n2) = tuple(marton_point), tuple(enh_point)
    relay = e["ix"] - e["h12"]
    rows = {
        # value at gamma = 0 and its slope in gamma
        "one": (m["A1"] - m1, (e["e1"] - n1) - (m["A1"] - m1)),
        "two": (m["A2"] - m2, (relay - n2) - (m["A2"] - m2)),
        "third": (m["S3"] - m1 - m2, (e["e1"] + e["e2"] - n1 - n2) - (m["S3"] - m1 - m2)),
        "last": (m["S4"] - m1 - m2, (relay - n1 - n2) - (m["S4"] - m1 - m2)),
        "gamma-info": (m["Gamma"], -m["Gamma"] - e["h12"]),
        "gamma-fb": (r_fb1, -e["h12x"]),
        "gamma-delta": (r_fb1, -e["h1u2"]),
    }
    slacks = tuple((k, c0 + gamma * c1) for k, (c0, c1) in rows.items())
    gmax = 1.0
    for c0, c1 in rows.values():
        if c1 < 0:
            gmax = min(gmax, max(c0, 0.0) / -c1)
    info_bound = m["Gamma"] / (m["Gamma"] + e["h12"]) if m["Gamma"] + e["h12"] > 0 else 1.0
    fb_bound = r_fb1 / e["h12x"] if e["h12x"] > 0 else math.inf
    target = RatePoint((1 - gamma) * m1 + gamma * n1, (1 - gamma) * m2 + gamma * n2)
    return UsefulnessCertificate(gamma, info_bound, fb_bound, gmax, marton_point, enh_point,
                                 target, slacks)


def mixed_scheme(marton_scheme: SchemeSpec, enh: TwoAuxSpec, gamma: float, y1_size: int) -> SchemeSpec:
    """Time-shared scheme: the Marton scheme with probability 1-gamma, and with
    probability gamma a superposition slot (U0 = U, U1 const, U2 = X) in which
    receiver 1 feeds back its output uncompressed. Alphabets are zero-padded."""
    nq, n0, n1, n2 = marton_scheme.sizes
    pu_x = enh.pmf.sum(axis=1)
    nu, nx = pu_x.shape
    m0, m2 = max(n0, nu), max(n2, nx)
    aux = np.zeros((nq + 1, m0, n1, m2))
    fmap = np.zeros((nq + 1, m0, n1, m2), dtype=int)
    aux[:nq, :n0, :, :n2] = marton_scheme.aux_pmf
    fmap[:nq, :n0, :, :n2] = marton_scheme.symbol_map
    aux[nq, :nu, 0, :nx] = pu_x
    fmap[nq] = np.minimum(np.arange(m2), nx - 1)[None, None, :]
    q = np.concatenate([(1 - gamma) * marton_scheme.q_pmf, [gamma]])
    t = np.zeros((nq + 1, y1_size, y1_size))
    t[:nq, :, 0] = 1.0
    t[nq] = np.eye(y1_size)
    return SchemeSpec(q, aux, fmap, test1=TestChannel(t, "y"))


def certificate_oracle(cert: UsefulnessCertificate, marton_scheme: SchemeSpec, enh: TwoAuxSpec,
                       channel: BroadcastChannel, r_fb1: float) -> tuple[bool, RegionVerdict]:
    """Direct hybrid-region evaluation of the explicit mixed scheme at the certified point."""
    joint = assemble_joint(mixed_scheme(marton_scheme, enh, cert.gamma, channel.y1_size), channel)
    verdict = thm3_region(joint, FeedbackBudget(r_fb1, 0.0))
    ok = verdict.feasible and contains_point(verdict.constraint_region, cert.target_point, GEOM_TOL)
    return ok, verdict


# ---------------------------------------------------------------------------
# Improvement report


def _binary_twoaux_grid(n: int) -> list[TwoAuxSpec]:
    vals = np.linspace(0.0, 1.0, n)
    out = []
    for a in vals[1:-1]:
        for b0 in vals:
            for b1 in vals:
                out.append(TwoAuxSpec.from_u([1 - a, a], [[1 - b0, b0], [1 - b1, b1]]))
    return out


def _sp_corner(j: JointPmf) -> tuple[RateRegion, float, float]:
    u1 = mutual_info(j, "U", "Y1")
    x2u = mutual_info(j, "X", "Y2", "U")
    x2 = mutual_info(j, "X", "Y2")
    reg = RateRegion([HalfPlane(1, 0, u1, "sp-r1"), HalfPlane(0, 1, x2u, "sp-r2"),
                      HalfPlane(1, 1, x2, "sp-sum")])
    return reg, u1, x2u


def _time_shared(schemes: Sequence[SchemeSpec], weights: Sequence[float]) -> SchemeSpec:
    """Stack single-slot schemes of equal shape into one scheme with coded time sharing."""
    return SchemeSpec(np.asarray(weights, dtype=float),
                      np.concatenate([sc.aux_pmf for sc in schemes]),
                      np.concatenate([sc.symbol_map for sc in schemes]))


def _key(p: RatePoint) -> tuple[float, float]:
    return (round(p.r1, 9), round(p.r2, 9))


def improvement_report(channel: BroadcastChannel, budget: FeedbackBudget, n: int = 11,
                       fractions: Sequence[float] = (0.25, 0.5, 0.75)) -> dict:
    """Look for a no-feedback boundary point that a passing certificate improves on.

    The baseline is the convex hull of both superposition orders over a grid of
    binary auxiliaries. Candidate Marton points are hull vertices and points inside
    hull edges (realized by time sharing the two endpoint schemes), as long as the
    endpoints come from superposition regions of the direction under test.
    Enhanced-receiver points come from the same grid.
    """
    if channel.x_size != 2:
        raise DomainError("improvement_report searches binary-input channels")
    grid = _binary_twoaux_grid(n)
    enh_pts: dict[int, list[tuple[TwoAuxSpec, tuple[float, float]]]] = {}
    sources: dict[tuple[float, float], dict[int, TwoAuxSpec]] = {}
    all_regions = []
    for d in (1, 2):
        ch = channel if d == 1 else channel.swapped()
        rows = []
        for ta in grid:
            j = assemble_twoaux(ta, ch)
            reg, u1, _ = _sp_corner(j)
            rows.append((ta, (u1, mutual_info(j, "X", "Y1 Y2", "U"))))
            if d == 2:
                reg = RateRegion(HalfPlane(h.a2, h.a1, h.b, h.name) for h in reg.halfplanes)
            all_regions.append(reg)
            for v in vertices(reg):
                sources.setdefault(_key(v), {}).setdefault(d, ta)
        enh_pts[d] = rows
    baseline = hull_region(all_regions)
    hull_pts = vertices(baseline)

    # (direction, Marton point in original coordinates, scheme in direction coordinates)
    candidates: list[tuple[int, RatePoint, SchemeSpec]] = []
    for i, v in enumerate(hull_pts):
        w = hull_pts[(i + 1) % len(hull_pts)]
        src_v, src_w = sources.get(_key(v), {}), sources.get(_key(w), {})
        for d in (1, 2):
            if d in src_v and v.r1 > GEOM_TOL and v.r2 > GEOM_TOL:
                candidates.append((d, v, superposition_scheme(src_v[d])))
            if d in src_v and d in src_w:
                pair = [superposition_scheme(src_v[d]), superposition_scheme(src_w[d])]
                for lam in fractions:
                    pt = RatePoint((1 - lam) * v.r1 + lam * w.r1, (1 - lam) * v.r2 + lam * w.r2)
                    if pt.r1 > GEOM_TOL and pt.r2 > GEOM_TOL:
                        candidates.append((d, pt, _time_shared(pair, [1 - lam, lam])))

    best = None
    for d, pt, scheme in candidates:
        ch = channel if d == 1 else channel.swapped()
        r_fb = budget.r_fb1 if d == 1 else budget.r_fb2
        if r_fb <= 0:
            continue
        mp = pt if d == 1 else RatePoint(pt.r2, pt.r1)
        enh_ta, (e1, e2) = max(enh_pts[d], key=lambda row: min(row[1][0] - mp.r1, row[1][1] - mp.r2))
        if min(e1 - mp.r1, e2 - mp.r2) < WITNESS_TOL:
            continue
        ep = RatePoint(e1, e2)
        try:
            probe = usefulness_certificate(scheme, mp, enh_ta, ep, ch, 0.5, r_fb)
        except PreconditionFailure:
            continue
        gamma = min(probe.gamma_max * (1 - 1e-6), 0.999)
        if gamma <= 0:
            continue
        cert = usefulness_certificate(scheme, mp, enh_ta, ep, ch, gamma, r_fb)
        if not cert.passed:
            continue
        tp = cert.target_point if d == 1 else RatePoint(cert.target_point.r2, cert.target_point.r1)
        excess = max(-h.slack(tp.r1, tp.r2) for h in baseline.halfplanes)
        if excess < WITNESS_TOL:
            continue
        if best is None or excess > best[0]:
            best = (excess, d, cert, tp, scheme, enh_ta)
    report: dict = {"baseline_region": [list(p) for p in hull_pts]}
    if best is None:
        report.update(witness_point=None, feedback_point_or_region=None, certificate=None,
                      message="none found at this grid")
        return report
    excess, d, cert, tp, scheme, enh_ta = best
    ch = channel if d == 1 else channel.swapped()
    agrees, _ = certificate_oracle(cert, scheme, enh_ta, ch, budget.r_fb1 if d == 1 else budget.r_fb2)
    report.update(
        oracle_agrees=agrees,
        witness_point=list(tp),
        direction=d,
        excess=excess,
        feedback_point_or_region=list(tp),
        certificate=cert.to_dict(),
        marton_q_pmf=scheme.q_pmf.tolist(),
        marton_aux_pmf=scheme.aux_pmf.tolist(),
        enh_twoaux=enh_ta.pmf.tolist(),
    )
    return report


# ---------------------------------------------------------------------------
# Blackwell channel optimizer


# sum-rate implied by the cited symmetric points; reaching it is not required
BLACKWELL_STRETCH_SUM = 1.18


@dataclass
class BlackwellResult:
    symmetric_rate: float
    p: float
    pmfs: tuple[list[float], list[float], list[float]]
    pattern: tuple[tuple[bool, bool], tuple[bool, bool]]
    vertices: list[list[float]]

    @property
    def sum_rate(self) -> float:
        return 2 * self.symmetric_rate

    def to_dict(self) -> dict:
        return {
            "symmetric_point": [self.symmetric_rate, self.symmetric_rate],
            "sum_rate": self.sum_rate,
            "nofb_sum_rate": ex.blackwell_nofb_sum(),
            "reference_points": [list(p) for p in ex.BLACKWELL_REFERENCE],
            "p": self.p,
            "pmfs": [list(v) for v in self.pmfs],
            "pattern": [list(v) for v in self.pattern],
            "vertices": self.vertices,
        }


def symmetric_rate(region: RateRegion) -> float:
    """Largest r with (r, r) in a region whose constraints all have nonnegative normals."""
    r = math.inf
    for h in region.halfplanes:
        s = h.a1 + h.a2
        if s <= 0:
            raise DomainError("symmetric rate needs nonnegative constraint normals")
        r = min(r, h.b / s)
    return max(r, 0.0)


def _softmax(z: np.ndarray) -> np.ndarray:
    w = np.exp(z - z.max())
    return w / w.sum()


def _unpack(theta: np.ndarray) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    p = 0.5 / (1 + math.exp(-float(theta[0])))
    pm = [_softmax(np.concatenate([[0.0], theta[1 + 2 * k: 3 + 2 * k]])) for k in range(3)]
    return p, pm[0], pm[1], pm[2]


BLACKWELL_PATTERNS = tuple(itertools.product(itertools.product((False, True), repeat=2), repeat=2))


def blackwell_objective(theta: np.ndarray, pattern, budget: FeedbackBudget,
                        channel: BroadcastChannel) -> float:
    p, a, b, c = _unpack(theta)
    verdict = thm2_region(assemble_joint(ex.blackwell_scheme(p, a, b, c, pattern), channel), budget)
    if not verdict.feasible:
        return 0.0
    return symmetric_rate(verdict.constraint_region)


def blackwell_optimize(budget: float = 8.0, seed: int = 0, screen: int = 12, keep: int = 3,
                       starts: int = 2, maxiter: int = 400) -> BlackwellResult:
    """Maximize the symmetric rate of the backward-decoding region on the Blackwell channel.

    Search space: P(Q=1)=P(Q=2)=p, independent input pmfs per slot and, for each
    of the two slots Q=1,2, which receivers feed back their output. Patterns are
    screened on seeded random starts, then the best ones are refined by Nelder-Mead.
    """
    rng = np.random.default_rng(seed)
    ch = ex.blackwell_channel()
    fb = FeedbackBudget(budget, budget)
    scored = []
    for pat in BLACKWELL_PATTERNS:
        thetas = [rng.normal(0.0, 1.0, 7) for _ in range(screen)]
        vals = [blackwell_objective(t, pat, fb, ch) for t in thetas]
        i = int(np.argmax(vals))
        scored.append((vals[i], pat, thetas[i]))
    scored.sort(key=lambda s: -s[0])
    best_val, best_theta, best_pat = -math.inf, None, None
    for val, pat, theta in scored[:keep]:
        inits = [theta] + [rng.normal(0.0, 1.0, 7) for _ in range(starts - 1)]
        for init in inits:
            res = minimize(lambda t: -blackwell_objective(t, pat, fb, ch), init, method="Nelder-Mead",
                           options={"maxiter": maxiter, "xatol": 1e-6, "fatol": 1e-9})
            if -res.fun > best_val:
                best_val, best_theta, best_pat = -res.fun, res.x, pat
    p, a, b, c = _unpack(best_theta)
    verdict = thm2_region(assemble_joint(ex.blackwell_scheme(p, a, b, c, best_pat), ch), fb)
    return BlackwellResult(symmetric_rate(verdict.constraint_region), p,
                           (a.tolist(), b.tolist(), c.tolist()), best_pat,
                           [list(v) for v in vertices(verdict.constraint_region)])
