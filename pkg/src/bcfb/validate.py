"""Cross-checks between the fixture constraint systems and the closed-form regions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fme import FIXTURES, fixture_region
from .geometry import GEOM_TOL, Infeasible, region_hausdorff, vertices
from .info import BroadcastChannel, FeedbackBudget, JointPmf, SchemeSpec, TestChannel, assemble_joint, mutual_info
from .regions import SLACK_TOL, RegionVerdict, delta_terms, thm1_region, thm2_region, thm4_region

DIRECT = {"appendix_a": thm1_region, "appendix_b": thm2_region, "appendix_c": thm4_region}


def _near_identity(rng: np.random.Generator, n: int, m: int, lo: float, hi: float,
                   lead: tuple[int, ...] = ()) -> np.ndarray:
    """Row-stochastic tables (lead + (n, m)) mixing a fixed map with Dirichlet noise."""
    eps = rng.uniform(lo, hi, size=lead + (1, 1))
    base = np.zeros((n, m))
    base[np.arange(n), np.arange(n) % m] = 1.0
    return (1 - eps) * base + eps * rng.dirichlet(np.ones(m), size=lead + (n,))


def random_instance(rng: np.random.Generator, fixture: str) -> tuple[SchemeSpec, BroadcastChannel]:
    """Random binary scheme and channel shaped for ``fixture``.

    Symbol maps lean on the cloud center and test channels are fairly noisy, so
    that a useful share of draws satisfies every feasibility condition.
    """
    nq = int(rng.integers(1, 3))
    q = rng.dirichlet(2 * np.ones(nq))
    p0 = rng.dirichlet(3 * np.ones(2), size=nq)
    p1 = rng.dirichlet(np.ones(2), size=(nq, 2))
    p2 = rng.dirichlet(np.ones(2), size=(nq, 2))
    aux = np.einsum("qa,qab,qac->qabc", p0, p1, p2)
    if rng.random() < 0.5:
        w = rng.uniform(0, 0.5)
        aux = (1 - w) * aux + w * rng.dirichlet(np.ones(8), size=nq).reshape(nq, 2, 2, 2)
    a, b, c = np.meshgrid(np.arange(2), np.arange(2), np.arange(2), indexing="ij")
    maps = [a ^ b ^ c, a ^ b, a ^ c, a]
    fmap = np.stack([maps[int(rng.integers(0, 4))] for _ in range(nq)])
    ch = BroadcastChannel.from_marginals(_near_identity(rng, 2, 2, 0.0, 0.6),
                                         _near_identity(rng, 2, 2, 0.0, 0.6))
    if rng.random() < 0.3:
        ch = BroadcastChannel(0.7 * ch.law + 0.3 * rng.dirichlet(np.ones(4), size=2).reshape(2, 2, 2))
    lo = 0.5 if fixture == "appendix_a" else 0.2
    if fixture == "appendix_a":
        t1 = TestChannel(_near_identity(rng, 2, 2, lo, 1.0, (nq, 2)), "y_u0")
        t2 = TestChannel(_near_identity(rng, 2, 2, lo, 1.0, (nq, 2)), "y_u0")
    else:
        t1 = TestChannel(_near_identity(rng, 2, 2, lo, 1.0, (nq,)), "y")
        t2 = TestChannel(_near_identity(rng, 2, 2, lo, 1.0, (nq,)), "y")
    upd = None
    if fixture == "appendix_c":
        # V is a noisy copy of one compressed output
        src = int(rng.integers(0, 2))
        v = np.broadcast_to(np.arange(2).reshape((1, 1, 1) + ((2, 1) if src == 0 else (1, 2))), (2,) * 5)
        eps = rng.uniform(0.5, 1.0)
        upd = (1 - eps) * np.eye(2)[v] + eps * rng.dirichlet(np.ones(2), size=(2,) * 5)
    return SchemeSpec(q, aux, fmap, t1, t2, upd), ch


# conditioning of the budget-feasibility term for each fixture
_BUDGET_FLOOR = {
    "appendix_a": (("Yt1", "Y1", "U0 U2 Y2"), ("Yt2", "Y2", "U0 U1 Y1")),
    "appendix_b": (("Yt1", "Y1", "U0 U2 Y2"), ("Yt2", "Y2", "U0 U1 Y1")),
    "appendix_c": (("Y1", "Yt1", "U0 U1 U2 Yt2"), ("Y2", "Yt2", "U0 U1 U2 Yt1")),
}


def random_budget(rng: np.random.Generator, joint: JointPmf, fixture: str) -> FeedbackBudget:
    """Budgets that usually clear the fixture's feasibility floor and land on either
    side of the Delta threshold; one draw in five ignores the floor."""
    def rate(a: str, b: str, g: str) -> float:
        return mutual_info(joint, a, b, g + " Q")

    out = []
    thresholds = (("Yt1", "Y1", "U0 Y2"), ("Yt2", "Y2", "U0 Y1"))
    for thr, floor in zip(thresholds, _BUDGET_FLOOR[fixture]):
        t, f = rate(*thr), rate(*floor)
        if rng.random() < 0.2 or f >= t:
            out.append(t * rng.uniform(0.3, 1.6))
        elif rng.random() < 0.5:
            out.append(rng.uniform(f, t))
        else:
            out.append(t * rng.uniform(1.0, 1.6))
    return FeedbackBudget(*out)


def _direct_ok(verdict: RegionVerdict) -> bool:
    # the projected system also carries the nonnegativity of the binning rates,
    # which the direct form reports as diagnostics
    if not verdict.feasible or any(s < -SLACK_TOL for _, s in verdict.diagnostics):
        return False
    try:
        vertices(verdict.constraint_region)
    except Infeasible:
        return False
    return True


@dataclass
class FmeReport:
    fixture: str
    compared: int = 0
    both_infeasible: int = 0
    attempts: int = 0
    max_hausdorff: float = 0.0
    mismatches: list[int] = field(default_factory=list)
    branches: set[tuple[bool, bool]] = field(default_factory=set)

    def passed(self, tol: float = GEOM_TOL) -> bool:
        return not self.mismatches and self.max_hausdorff <= tol

    def to_dict(self) -> dict:
        return {
            "fixture": self.fixture,
            "compared": self.compared,
            "both_infeasible": self.both_infeasible,
            "attempts": self.attempts,
            "max_hausdorff": self.max_hausdorff,
            "mismatches": self.mismatches,
            "delta_branches": sorted([list(b) for b in self.branches]),
        }


def fme_check(fixture: str, trials: int = 100, seed: int = 0, max_attempts: int | None = None) -> FmeReport:
    """Compare the projected fixture with the direct region until ``trials`` draws are
    feasible on both sides. A draw that is feasible on one side only is a mismatch.

    ``branches`` records (Delta1 > 0, Delta2 > 0) over the compared draws.
    """
    if fixture not in FIXTURES:
        raise ValueError(f"unknown fixture {fixture!r}")
    rng = np.random.default_rng(seed)
    report = FmeReport(fixture)
    limit = max_attempts if max_attempts is not None else 40 * trials
    while report.compared < trials and report.attempts < limit:
        report.attempts += 1
        scheme, ch = random_instance(rng, fixture)
        joint = assemble_joint(scheme, ch)
        budget = random_budget(rng, joint, fixture)
        verdict = DIRECT[fixture](joint, budget)
        direct_ok = _direct_ok(verdict)
        try:
            projected = fixture_region(fixture, joint, budget.r_fb1, budget.r_fb2)
            proj_ok = True
        except Infeasible:
            proj_ok = False
        if direct_ok and proj_ok:
            report.compared += 1
            report.max_hausdorff = max(report.max_hausdorff,
                                       region_hausdorff(projected, verdict.constraint_region))
            d = delta_terms(joint, budget)
            report.branches.add((d.delta1 > 0, d.delta2 > 0))
        elif not direct_ok and not proj_ok:
            report.both_infeasible += 1
        else:
            report.mismatches.append(report.attempts - 1)
    return report
