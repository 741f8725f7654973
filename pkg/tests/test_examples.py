import math

import numpy as np
import pytest

from bcfb import examples as ex
from bcfb.geometry import region_hausdorff, vertices
from bcfb.info import DomainError
from bcfb.regions import superposition

# roots of 1 - H(s*p) + (1-e)H(s) - (1-e) computed with scipy's brentq (xtol 1e-15)
S0_FROZEN = {(0.1, 0.4): 0.09204330553768279,
             (0.1, 0.45): 0.009525030855093741,
             (0.05, 0.25): 0.023076118485793686}

# binary symmetric terms at p1=0.2, p2=0.1, beta1=0.2, beta2=0.3 by explicit enumeration
BSBC_FROZEN = {"I(U;Y1)": 0.09561854227550569, "I(X;Y2)": 0.5310044064107186,
               "I(X;Yt1,Y2|U)": 0.3703544825034506, "I(Yt1;Y1|Y2,U)": 0.0893548265957207}


@pytest.mark.parametrize("pe,root", S0_FROZEN.items())
def test_s0_frozen(pe, root):
    assert ex.bscbec_s0(*pe) == pytest.approx(root, abs=1e-9)


def test_s0_without_interior_root():
    # e <= 4p(1-p): every s below 1/2 has the single-rate constraints active
    assert ex.bscbec_s0(0.1, 0.2) == 0.5
    with pytest.raises(DomainError):
        ex.bscbec_s0(0.1, 0.7)


def test_bsbc_terms_frozen():
    t = ex.bsbc_terms(ex.BsbcParams(0.2, 0.1, 0.2, 0.3))
    for k, v in BSBC_FROZEN.items():
        assert t[k] == pytest.approx(v, abs=1e-12)
    assert sum(ex.bsbc_alphas(ex.BsbcParams(0.2, 0.1, 0.2, 0.3))) == pytest.approx(1.0)


def test_bsbc_region_vertices():
    v = vertices(ex.bsbc_region(ex.BsbcParams(0.2, 0.1, 0.2, 0.3), 0.8).region)
    a, s = BSBC_FROZEN["I(U;Y1)"], BSBC_FROZEN["I(X;Y2)"] - BSBC_FROZEN["I(Yt1;Y1|Y2,U)"]
    assert [c for p in v for c in p] == pytest.approx([0, 0, a, 0, a, s - a, 0, s], abs=1e-12)


def test_bsbc_without_compression_is_superposition_corner():
    t = ex.bsbc_terms(ex.BsbcParams(0.3, 0.1, 0.0, 0.5))
    assert t["I(X;Yt1,Y2|U)"] == pytest.approx(0.0, abs=1e-12)
    assert t["I(Yt1;Y1|Y2,U)"] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("beta", [0.0, 0.1, 0.33])
def test_nofb_forms_match_generic_superposition(beta):
    ch = ex.bsbc_channel(0.25, 0.1)
    assert region_hausdorff(ex.bsbc_nofb(0.25, 0.1, beta), superposition(ex.xor_twoaux(beta), ch, 1)) <= 1e-12
    p = ex.BscBecParams(0.1, 0.2, s=beta)
    assert region_hausdorff(ex.bscbec_nofb(p), superposition(ex.xor_twoaux(beta), ex.bscbec_channel(0.1, 0.2), 1)) <= 1e-12


def test_parameter_domains():
    with pytest.raises(DomainError):
        ex.BsbcParams(0.6, 0.1)
    with pytest.raises(DomainError):
        ex.BscBecParams(0.0, 0.2)
    with pytest.raises(DomainError):
        ex.BscBecParams(0.1, ex.H(0.1)).case
    with pytest.raises(DomainError):
        ex.bscbec_case1(ex.BscBecParams(0.1, 0.7), 0.8)
    with pytest.raises(DomainError):
        ex.GaussianParams(10, 1, 4)
    with pytest.raises(DomainError):
        ex.gaussian_c(-1)


def test_gaussian_closed_forms():
    assert ex.gaussian_c(10) == pytest.approx(0.5 * math.log2(11), abs=1e-15)
    q = ex.gaussian_enhanced_quantized(10, 4, 1, 0.3)
    exact = [h.b for h in ex.gaussian_enhanced(10, 4, 1, 0.3).halfplanes]
    assert q[0] == pytest.approx(exact[0], abs=1e-3)
    assert q[1] == pytest.approx(exact[1], abs=1e-3)


def test_gaussian_feedback_region_approaches_nofb():
    g = ex.GaussianParams(10, 4, 1, 0.4, 1e9)
    v = ex.gaussian_region(g, 0.8)
    assert v.feasible
    # the corner point of the no-feedback region is reached
    a = v.region.max_r1()
    assert a == pytest.approx(ex.gaussian_nofb(10, 4, 1, 0.4).max_r1(), abs=1e-12)
    assert v.region.max_r2(a) == pytest.approx(ex.gaussian_nofb(10, 4, 1, 0.4).max_r2(a), abs=1e-6)


def test_blackwell_channel():
    ch = ex.blackwell_channel()
    assert ch.law.shape == (3, 4, 4) or ch.law.shape[0] == 3
    # each input gives a deterministic pair of outputs
    support = (ch.law > 0).sum(axis=(1, 2))
    assert ex.blackwell_nofb_sum() == pytest.approx(1.0)
    assert np.all(support >= 1)
