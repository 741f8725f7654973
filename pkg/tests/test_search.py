import numpy as np
import pytest

from bcfb import examples as ex
from bcfb.figures import dominance_margin, grid_with_steps
from bcfb.geometry import HalfPlane, RatePoint, RateRegion, hull_frontier, vertices
from bcfb.info import DomainError, FeedbackBudget, TwoAuxSpec, assemble_joint, assemble_twoaux, mutual_info
from bcfb.regions import marton, superposition_scheme
from bcfb.search import (BLACKWELL_PATTERNS, Axis, GridSpec, PreconditionFailure, blackwell_objective,
                         certificate_oracle, frontier, improvement_report, nofb_regions, symmetric_rate,
                         usefulness_certificate)


def test_axis_values_and_validation():
    assert Axis("a", 0.0, 1.0, 3).values() == [0.0, 0.5, 1.0]
    assert Axis("b", 1.0, 100.0, 3, log=True).values() == pytest.approx([1.0, 10.0, 100.0])
    assert Axis("c", 0.2, 0.9, 1).values() == [0.2]
    with pytest.raises(DomainError):
        Axis("d", 0.0, 1.0, 0)
    with pytest.raises(DomainError):
        Axis("e", 0.0, 1.0, 3, log=True)
    with pytest.raises(DomainError):
        GridSpec((Axis("a", 0, 1, 2), Axis("a", 0, 1, 2)))


def test_frontier_is_deterministic_and_pareto():
    cp = {"p1": 0.25, "p2": 0.1}
    g = grid_with_steps("bsbc", 9)
    a = frontier("bsbc", g, cp, FeedbackBudget(0.8, 0.0), n=51)
    b = frontier("bsbc", g, cp, FeedbackBudget(0.8, 0.0), n=51)
    assert a.points == b.points and a.params == b.params
    r2 = [p.r2 for p in a.points]
    assert all(x >= y - 1e-15 for x, y in zip(r2, r2[1:]))
    with pytest.raises(DomainError):
        frontier("nope")


def test_zero_budget_gives_no_gain():
    cp = {"p1": 0.25, "p2": 0.1}
    g = grid_with_steps("bsbc", 11)
    fb = frontier("bsbc", g, cp, FeedbackBudget(0.0, 0.0), n=101)
    base = nofb_regions("bsbc", GridSpec((Axis("beta1", 0.0, 0.5, 201), Axis("beta2", 0.0, 0.5, 1))), cp)
    ref = hull_frontier(base, [p.r1 for p in fb.points])
    assert dominance_margin(fb.points, ref)[0] <= 1e-9


def test_generic_family_runs_on_a_small_channel():
    axes = (Axis("a", 0.0, 1.0, 3), Axis("b0", 0.0, 1.0, 3), Axis("b1", 0.0, 1.0, 3),
            Axis("k1", 0.0, 1.0, 2), Axis("k2", 0.0, 1.0, 2))
    res = frontier("generic-thm2-smallalphabet", GridSpec(axes, refine=0),
                   {"channel": ex.bsbc_channel(0.2, 0.1)}, FeedbackBudget(0.5, 0.5), n=21)
    assert res.points and res.points[0].r2 > 0


def test_symmetric_rate():
    r = RateRegion([HalfPlane(1, 0, 0.5), HalfPlane(0, 1, 0.7), HalfPlane(1, 1, 0.8)])
    assert symmetric_rate(r) == pytest.approx(0.4)
    with pytest.raises(DomainError):
        symmetric_rate(RateRegion([HalfPlane(-1, 0, 0.5)]))


def test_blackwell_objective_range():
    ch = ex.blackwell_channel()
    v = blackwell_objective(np.zeros(7), BLACKWELL_PATTERNS[0], FeedbackBudget(8.0, 8.0), ch)
    assert 0.0 <= v <= np.log2(3)


# ---------------------------------------------------------------------------
# certificate


def _passing_certificate(seed: int = 7):
    ch = ex.bsbc_channel(0.2, 0.1)
    rng = np.random.default_rng(seed)
    for _ in range(500):
        ta = TwoAuxSpec.from_u(rng.dirichlet([1, 1]), rng.dirichlet([1, 1], size=2))
        scheme = superposition_scheme(ta)
        vs = vertices(marton(assemble_joint(scheme, ch)))
        w = rng.dirichlet(np.ones(len(vs)))
        mp = RatePoint(sum(a * v.r1 for a, v in zip(w, vs)), sum(a * v.r2 for a, v in zip(w, vs)))
        enh = TwoAuxSpec.from_u(rng.dirichlet([1, 1]), rng.dirichlet([1, 1], size=2))
        jj = assemble_twoaux(enh, ch)
        ep = RatePoint(0.8 * mutual_info(jj, "U", "Y1"), 0.8 * mutual_info(jj, "X", "Y1 Y2", "U"))
        try:
            probe = usefulness_certificate(scheme, mp, enh, ep, ch, 0.5, 0.1)
        except PreconditionFailure:
            continue
        if probe.gamma_max > 1e-3:
            return ch, scheme, mp, enh, ep, probe.gamma_max
    raise AssertionError("no certificate candidate found")


def test_certificate_monotone_in_gamma():
    ch, scheme, mp, enh, ep, gmax = _passing_certificate()
    g = 0.9 * min(gmax, 0.999)
    for gam in (g, g / 2, g / 10):
        c = usefulness_certificate(scheme, mp, enh, ep, ch, gam, 0.1)
        assert c.passed
        assert certificate_oracle(c, scheme, enh, ch, 0.1)[0]
    if gmax < 0.6:
        assert not usefulness_certificate(scheme, mp, enh, ep, ch, 1.5 * gmax, 0.1).passed


def test_certificate_rows_affine():
    ch, scheme, mp, enh, ep, _ = _passing_certificate()
    s = [dict(usefulness_certificate(scheme, mp, enh, ep, ch, g, 0.1).constraint_slacks) for g in (0.1, 0.3, 0.5)]
    for k in s[0]:
        assert s[1][k] - s[0][k] == pytest.approx(s[2][k] - s[1][k], abs=1e-12)


def test_certificate_preconditions():
    ch, scheme, mp, enh, ep, _ = _passing_certificate()
    with pytest.raises(DomainError):
        usefulness_certificate(scheme, mp, enh, ep, ch, 0.0, 0.1)
    with pytest.raises(PreconditionFailure, match="marton-point"):
        usefulness_certificate(scheme, RatePoint(5.0, 5.0), enh, ep, ch, 0.5, 0.1)
    with pytest.raises(PreconditionFailure, match="enh-point"):
        usefulness_certificate(scheme, mp, enh, RatePoint(5.0, 0.0), ch, 0.5, 0.1)
    # receiver 1 stronger: the cloud center gap is negative
    flipped = ex.bsbc_channel(0.1, 0.2)
    with pytest.raises(PreconditionFailure, match="gamma-gap"):
        usefulness_certificate(superposition_scheme(ex.xor_twoaux(0.2)), RatePoint(0.0, 0.0), enh,
                               RatePoint(0.0, 0.0), flipped, 0.5, 0.1)


def test_report_without_feedback_budget():
    rep = improvement_report(ex.bsbc_channel(0.2, 0.1), FeedbackBudget(0.0, 0.0), n=7)
    assert rep["certificate"] is None and rep["message"] == "none found at this grid"
    with pytest.raises(DomainError):
        improvement_report(ex.blackwell_channel(), FeedbackBudget(1.0, 1.0))


def test_report_bsc_bec_direction_two():
    rep = improvement_report(ex.bscbec_channel(0.1, 0.7), FeedbackBudget(0.8, 0.8))
    assert rep["direction"] == 2 and rep["certificate"]["pass"] and rep["oracle_agrees"]
    assert rep["excess"] >= 1e-6
