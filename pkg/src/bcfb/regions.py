"""Direct evaluators for the no-feedback, outer and feedback rate regions.

Every evaluator takes an assembled joint (see ``info.assemble_joint``) and
conditions all terms on Q, so coded time-sharing needs no special handling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import HalfPlane, RateRegion
from .info import (BroadcastChannel, FeedbackBudget, JointPmf, SchemeSpec, StructuralError,
                   TestChannel, TwoAuxSpec, assemble_joint, assemble_twoaux, conditional_entropy,
                   mutual_info)

SLACK_TOL = 1e-12

# Variable relabeling that exchanges the roles of the two receivers.
RECEIVER_SWAP = {"U1": "U2", "U2": "U1", "Y1": "Y2", "Y2": "Y1", "Yt1": "Yt2", "Yt2": "Yt1"}


class Unsupported(ValueError):
    """Input outside the case a transform handles."""


@dataclass(frozen=True)
class DeltaTerms:
    delta1: float
    delta2: float


@dataclass(frozen=True)
class RegionVerdict:
    """Region plus the named side conditions it depends on.

    ``feasibility`` holds (name, slack) pairs; ``region`` is None when any slack is
    negative beyond SLACK_TOL. ``diagnostics`` are reported but never enforced.
    """

    constraints: tuple[HalfPlane, ...]
    feasibility: tuple[tuple[str, float], ...] = ()
    diagnostics: tuple[tuple[str, float], ...] = ()
    deltas: DeltaTerms | None = None
    extras: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return all(s >= -SLACK_TOL for _, s in self.feasibility)

    @property
    def region(self) -> RateRegion | None:
        return RateRegion(self.constraints) if self.feasible else None

    @property
    def constraint_region(self) -> RateRegion:
        """The rate constraints regardless of side conditions."""
        return RateRegion(self.constraints)

    def swapped(self) -> "RegionVerdict":
        hs = tuple(HalfPlane(h.a2, h.a1, h.b, h.name) for h in self.constraints)
        d = None if self.deltas is None else DeltaTerms(self.deltas.delta2, self.deltas.delta1)
        return RegionVerdict(hs, self.feasibility, self.diagnostics, d, self.extras)

    def to_dict(self) -> dict:
        from .geometry import vertices, Infeasible

        out: dict = {
            "constraints": [{"name": h.name, "a1": h.a1, "a2": h.a2, "b": h.b} for h in self.constraints],
            "feasibility": [{"name": n, "slack": s} for n, s in self.feasibility],
            "diagnostics": [{"name": n, "slack": s} for n, s in self.diagnostics],
            "feasible": self.feasible,
        }
        if self.deltas is not None:
            out["deltas"] = {"delta1": self.deltas.delta1, "delta2": self.deltas.delta2}
        try:
            out["vertices"] = [[p.r1, p.r2] for p in vertices(self.region)] if self.feasible else []
        except Infeasible:
            out["vertices"] = []
        return out


def _require(joint: JointPmf, names: str) -> None:
    for n in names.split():
        joint.axis(n)


class _Terms:
    """Shorthand for information terms conditioned on Q."""

    def __init__(self, joint: JointPmf) -> None:
        self.j = joint
        self.has_q = "Q" in joint.variables

    def __call__(self, left: str, right: str, given: str = "") -> float:
        g = given + (" Q" if self.has_q else "")
        return mutual_info(self.j, left, right, g)

    def h(self, target: str, given: str = "") -> float:
        g = given + (" Q" if self.has_q else "")
        return conditional_entropy(self.j, target, g)


def _r1(b: float, name: str) -> HalfPlane:
    return HalfPlane(1.0, 0.0, b, name)


def _r2(b: float, name: str) -> HalfPlane:
    return HalfPlane(0.0, 1.0, b, name)


def _sum(b: float, name: str) -> HalfPlane:
    return HalfPlane(1.0, 1.0, b, name)


# ---------------------------------------------------------------------------
# No-feedback regions and outer bounds


def marton(joint: JointPmf) -> RateRegion:
    _require(joint, "U0 U1 U2 Y1 Y2")
    I = _Terms(joint)
    i12 = I("U1", "U2", "U0")
    a1 = I("U0 U1", "Y1")
    a2 = I("U0 U2", "Y2")
    return RateRegion([
        _r1(a1, "marton-r1"),
        _r2(a2, "marton-r2"),
        _sum(a1 + I("U2", "Y2", "U0") - i12, "marton-sum1"),
        _sum(a2 + I("U1", "Y1", "U0") - i12, "marton-sum2"),
    ])


def superposition(twoaux: TwoAuxSpec, channel: BroadcastChannel, which: int = 1) -> RateRegion:
    """Cloud center U decoded by receiver ``which``, which is the weaker one."""
    j = assemble_twoaux(twoaux, channel)
    if which == 2:
        return _swap_region(superposition(twoaux, channel.swapped(), 1))
    u_y1 = mutual_info(j, "U", "Y1")
    return RateRegion([
        _r1(u_y1, "sp-r1"),
        _r2(mutual_info(j, "X", "Y2", "U"), "sp-r2"),
        _sum(mutual_info(j, "X", "Y2"), "sp-sum"),
    ])


def nair_elgamal_outer(twoaux: TwoAuxSpec, channel: BroadcastChannel) -> RateRegion:
    j = assemble_twoaux(twoaux, channel)
    u1 = mutual_info(j, "U", "Y1")
    v2 = mutual_info(j, "V", "Y2")
    return RateRegion([
        _r1(u1, "ne-r1"),
        _r2(v2, "ne-r2"),
        _sum(u1 + mutual_info(j, "X", "Y2", "U"), "ne-sum1"),
        _sum(v2 + mutual_info(j, "X", "Y1", "V"), "ne-sum2"),
    ])


def nair_elgamal_from_joint(joint: JointPmf) -> RateRegion:
    """Outer bound with U = (Q, U0, U1) and V = (Q, U0, U2) taken from a scheme joint."""
    u = "Q U0 U1" if "Q" in joint.variables else "U0 U1"
    v = "Q U0 U2" if "Q" in joint.variables else "U0 U2"
    u1 = mutual_info(joint, u, "Y1")
    v2 = mutual_info(joint, v, "Y2")
    return RateRegion([
        _r1(u1, "ne-r1"),
        _r2(v2, "ne-r2"),
        _sum(u1 + mutual_info(joint, "X", "Y2", u), "ne-sum1"),
        _sum(v2 + mutual_info(joint, "X", "Y1", v), "ne-sum2"),
    ])


def enhanced_outer(twoaux: TwoAuxSpec, channel: BroadcastChannel, i: int = 1) -> RateRegion:
    """Outer bound from handing receiver 1's output to receiver 2 (i=1) or the reverse."""
    if i == 2:
        return _swap_region(enhanced_outer(twoaux, channel.swapped(), 1))
    j = assemble_twoaux(twoaux, channel)
    return RateRegion([
        _r1(mutual_info(j, "U", "Y1"), "enh-r1"),
        _r2(mutual_info(j, "X", "Y1 Y2", "U"), "enh-r2"),
    ])


def _swap_region(region: RateRegion) -> RateRegion:
    return RateRegion(HalfPlane(h.a2, h.a1, h.b, h.name) for h in region.halfplanes)


# ---------------------------------------------------------------------------
# Feedback regions


def superposition_joint(twoaux: TwoAuxSpec, channel: BroadcastChannel,
                        test1: TestChannel | None = None) -> JointPmf:
    """Scheme joint with U0 = U, U1 = const, U2 = X and optional compression of Y1."""
    return assemble_joint(superposition_scheme(twoaux, test1), channel)


def superposition_scheme(twoaux: TwoAuxSpec, test1: TestChannel | None = None) -> SchemeSpec:
    p = twoaux.pmf.sum(axis=1)  # P(u, x)
    nu, nx = p.shape
    aux = p[None, :, None, :]
    fmap = np.broadcast_to(np.arange(nx)[None, None, None, :], (1, nu, 1, nx)).copy()
    t1 = test1
    if t1 is not None and t1.form == "y_u0" and t1.table.shape[1] != nu:
        raise StructuralError("U-conditioned test channel does not match |U|")
    return SchemeSpec(np.ones(1), aux, fmap, test1=t1)


def simple_scheme(twoaux: TwoAuxSpec, test1: TestChannel, channel: BroadcastChannel,
                  budget: FeedbackBudget) -> RegionVerdict:
    """Superposition with receiver 1's output compressed and relayed in the cloud center."""
    j = superposition_joint(twoaux, channel, test1)
    I = _Terms(j)
    gap = I("U0", "Y2") - I("U0", "Y1")
    wz = I("Yt1", "Y1", "Y2 U0")
    hs = (_r1(I("U0", "Y1"), "simple-r1"), _r2(I("U2", "Yt1 Y2", "U0"), "simple-r2"))
    feas = (("wz-vs-gamma", gap - wz), ("wz-vs-budget", budget.r_fb1 - wz))
    return RegionVerdict(hs, feas, extras={"gamma_gap": gap})


def delta_terms(joint: JointPmf, budget: FeedbackBudget) -> DeltaTerms:
    I = _Terms(joint)
    return DeltaTerms(max(0.0, I("Yt1", "Y1", "U0 Y2") - budget.r_fb1),
                      max(0.0, I("Yt2", "Y2", "U0 Y1") - budget.r_fb2))


def thm1_region(joint: JointPmf, budget: FeedbackBudget) -> RegionVerdict:
    """Sliding-window scheme; compression may depend on the cloud center."""
    _require(joint, "U0 U1 U2 Y1 Y2 Yt1 Yt2")
    I = _Terms(joint)
    d = delta_terms(joint, budget)
    i12 = I("U1", "U2", "U0")
    ca = I("U0 U1", "Y1 Yt2") - I("Yt2", "U0 Y2", "Y1")
    cb = I("U0 U2", "Y2 Yt1") - I("Yt1", "U0 Y1", "Y2")
    b1 = I("U1", "Y1 Yt2", "U0")
    b2 = I("U2", "Y2 Yt1", "U0")
    k1 = I("Yt1", "Y1", "U0 U2 Y2")
    k2 = I("Yt2", "Y2", "U0 U1 Y1")
    c2 = I("U0", "Y2")
    c1 = I("U0", "Y1")
    hs = (
        _r1(ca, "13a"),
        _r1(c2 + b1 - d.delta2 - k1, "13b"),
        _r2(cb, "13c"),
        _r2(c1 + b2 - d.delta1 - k2, "13d"),
        _sum(ca + b2 - d.delta1 - i12, "13e"),
        _sum(cb + b1 - d.delta2 - i12, "13f"),
        _sum(ca + cb - i12, "13g"),
    )
    feas = (
        ("15a", b1 - d.delta2),
        ("15b", b2 - d.delta1),
        ("15c-cloud", c2 - k1),
        ("15c-budget", budget.r_fb1 - k1),
        ("15d-cloud", c1 - k2),
        ("15d-budget", budget.r_fb2 - k2),
    )
    diag = (("extra-sum", b1 + b2 - d.delta1 - d.delta2 - i12),)
    return RegionVerdict(hs, feas, diag, d)


def thm2_region(joint: JointPmf, budget: FeedbackBudget) -> RegionVerdict:
    """Backward-decoding scheme; compression sees only the receiver's output."""
    _require(joint, "U0 U1 U2 Y1 Y2 Yt1 Yt2")
    I = _Terms(joint)
    d = delta_terms(joint, budget)
    i12 = I("U1", "U2", "U0")
    ca = I("U0 U1", "Y1 Yt2") - I("Yt2", "Y2", "Y1")
    cb = I("U0 U2", "Y2 Yt1") - I("Yt1", "Y1", "Y2")
    b1 = I("U1", "Y1 Yt2", "U0")
    b2 = I("U2", "Y2 Yt1", "U0")
    hs = (
        _r1(ca, "17a"),
        _r2(cb, "17b"),
        _sum(ca + b2 - d.delta1 - i12, "17c"),
        _sum(cb + b1 - d.delta2 - i12, "17d"),
        _sum(ca + cb - i12, "17e"),
    )
    feas = (
        ("18a", budget.r_fb1 - I("Yt1", "Y1", "U0 U2 Y2")),
        ("18b", budget.r_fb2 - I("Yt2", "Y2", "U0 U1 Y1")),
    )
    diag = (
        ("extra-sum", b1 + b2 - d.delta1 - d.delta2 - i12),
        ("extra-sat1", b1 - d.delta2),
        ("extra-sat2", b2 - d.delta1),
    )
    return RegionVerdict(hs, feas, diag, d)


def thm2_scheme_region(scheme: SchemeSpec, channel: BroadcastChannel,
                       budget: FeedbackBudget) -> RegionVerdict:
    for tc in (scheme.test1, scheme.test2):
        if tc is not None and tc.form != "y":
            raise StructuralError("this region only admits test channels of the form P(yt|y,q)")
    return thm2_region(assemble_joint(scheme, channel), budget)


def thm3_region(joint: JointPmf, budget: FeedbackBudget) -> RegionVerdict:
    """Only receiver 1's output is compressed; rates are relayed to receiver 2."""
    _require(joint, "U0 U1 U2 Y1 Y2 Yt1")
    I = _Terms(joint)
    d1 = max(0.0, I("Yt1", "Y1", "U0 Y2") - budget.r_fb1)
    i12 = I("U1", "U2", "U0")
    a = I("U0 U1", "Y1")
    relay = I("U0 U2", "Yt1 Y2") - I("Yt1", "U0 U1 U2 Y1", "Y2")
    hs = (
        _r1(a, "19a"),
        _r2(relay, "19b"),
        _sum(a + I("U2", "Y2 Yt1", "U0") - d1 - i12, "19c"),
        _sum(I("U1", "Y1", "U0") + relay - i12, "19d"),
    )
    feas = (("20", budget.r_fb1 - I("Yt1", "U1 Y1", "U0 U2 Y2")),)
    return RegionVerdict(hs, feas, (), DeltaTerms(d1, 0.0))


def thm3_swapped_region(joint: JointPmf, budget: FeedbackBudget) -> RegionVerdict:
    return thm3_region(joint.rename(RECEIVER_SWAP), budget.swapped()).swapped()


def cor1_joint_region(joint: JointPmf, budget: FeedbackBudget) -> RegionVerdict:
    """Superposition form on a joint where U0 is the cloud center and X the satellite."""
    _require(joint, "U0 X Y1 Y2 Yt1")
    I = _Terms(joint)
    u1 = I("U0", "Y1")
    wz = I("Yt1", "Y1", "U0 Y2")
    hs = (
        _r1(u1, "21a"),
        _sum(u1 + I("X", "Y2 Yt1", "U0"), "21b"),
        _sum(I("X", "Y2") - wz, "21c"),
    )
    return RegionVerdict(hs, (("22", budget.r_fb1 - wz),))


def cor1_region(twoaux: TwoAuxSpec, test1: TestChannel | None, channel: BroadcastChannel,
                budget: FeedbackBudget) -> RegionVerdict:
    return cor1_joint_region(superposition_joint(twoaux, channel, test1), budget)


def cor1_swapped_region(twoaux: TwoAuxSpec, test2: TestChannel | None, channel: BroadcastChannel,
                        budget: FeedbackBudget) -> RegionVerdict:
    return cor1_region(twoaux, test2, channel.swapped(), budget.swapped()).swapped()


def thm4_region(joint: JointPmf, budget: FeedbackBudget, enforce_budget: bool = True) -> RegionVerdict:
    """Scheme where the transmitter forwards a processed update V of both feedback signals."""
    _require(joint, "U0 U1 U2 Y1 Y2 Yt1 Yt2 V")
    I = _Terms(joint)
    i12 = I("U1", "U2", "U0")
    a1 = I("U0 U1", "Y1 Yt1 V") - I("V", "U0 U1 U2 Yt2", "Yt1 Y1")
    a2 = I("U0 U2", "Y2 Yt2 V") - I("V", "U0 U1 U2 Yt1", "Yt2 Y2")
    b1 = I("U1", "Y1 Yt1 V", "U0")
    b2 = I("U2", "Y2 Yt2 V", "U0")
    hs = (
        _r1(a1, "thm4-r1"),
        _r2(a2, "thm4-r2"),
        _sum(a1 + b2 - i12, "thm4-sum1"),
        _sum(a2 + b1 - i12, "thm4-sum2"),
        _sum(a1 + a2 - i12, "thm4-sum3"),
    )
    feas: tuple = ()
    if enforce_budget:
        feas = (
            ("fb1", budget.r_fb1 - I("Y1", "Yt1", "U0 U1 U2 Yt2")),
            ("fb2", budget.r_fb2 - I("Y2", "Yt2", "U0 U1 U2 Yt1")),
            ("fb-sum", budget.r_fb1 + budget.r_fb2 - I("Y1 Y2", "Yt1 Yt2", "U0 U1 U2")),
        )
    diag = (("extra-binning", b1 + b2 - i12),)
    return RegionVerdict(hs, feas, diag)


def thm4_scheme_region(scheme: SchemeSpec, channel: BroadcastChannel,
                       budget: FeedbackBudget) -> RegionVerdict:
    if scheme.update is None:
        raise StructuralError("this region needs an update channel P(v|u0,u1,u2,yt1,yt2)")
    return thm4_region(assemble_joint(scheme, channel), budget)


def cor2_region(scheme: SchemeSpec, channel: BroadcastChannel) -> RateRegion:
    """Unlimited feedback: compression outputs are the channel outputs themselves."""
    if scheme.update is None:
        raise StructuralError("this region needs an update channel P(v|u0,u1,u2,y1,y2)")
    nq = scheme.q_pmf.size
    full = SchemeSpec(scheme.q_pmf, scheme.aux_pmf, scheme.symbol_map,
                      TestChannel.identity(nq, channel.y1_size),
                      TestChannel.identity(nq, channel.y2_size), scheme.update)
    verdict = thm4_region(assemble_joint(full, channel), FeedbackBudget(), enforce_budget=False)
    return verdict.constraint_region


# ---------------------------------------------------------------------------
# Cloud-center merge for Marton's region


def marton_sufficiency_transform(joint: JointPmf) -> JointPmf:
    """Merge U1 into the cloud center when receiver 2 decodes (U0, U1) at least as well.

    Raises Unsupported when I(U0,U1;Y1) > I(U0,U1;Y2).
    """
    I = _Terms(joint)
    lhs, rhs = I("U0 U1", "Y1"), I("U0 U1", "Y2")
    if lhs > rhs + SLACK_TOL:
        raise Unsupported(f"merge needs I(U0,U1;Y1) <= I(U0,U1;Y2); got {lhs:.6g} > {rhs:.6g}")
    if joint.size_of("U1") == 1:
        return joint
    names = list(joint.variables)
    a0 = names.index("U0")
    probs = np.moveaxis(joint.probs, names.index("U1"), a0 + 1)
    moved = [n for n in names if n != "U1"]
    moved.insert(a0 + 1, "U1")
    shape = list(probs.shape)
    merged = shape[:a0] + [shape[a0] * shape[a0 + 1], 1] + shape[a0 + 2:]
    return JointPmf(tuple(moved), probs.reshape(merged))
