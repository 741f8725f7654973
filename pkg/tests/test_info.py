import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bcfb.info import (MAX_TENSOR_ENTRIES, BroadcastChannel, DomainError, FeedbackBudget, JointPmf,
                       SchemeSpec, StructuralError, assemble_joint, binary_convolve,
                       binary_entropy, conditional_entropy, mutual_info)
from bcfb.info import TestChannel as Compression
from oracle import Enum


def _enum_of(joint: JointPmf) -> Enum:
    e = Enum(joint.variables)
    for idx in zip(*np.nonzero(joint.probs)):
        e.add(float(joint.probs[idx]), **dict(zip(joint.variables, (int(i) for i in idx))))
    return e


def _random_joint(rng, shape=(2, 3, 2, 4)) -> JointPmf:
    p = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
    return JointPmf(("A", "B", "C", "D"), p)


def test_binary_entropy_values():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-15)
    assert binary_entropy(0.11) == pytest.approx(-0.11 * math.log2(0.11) - 0.89 * math.log2(0.89), abs=1e-15)


def test_binary_convolve():
    assert binary_convolve(0.1, 0.2) == pytest.approx(0.1 * 0.8 + 0.9 * 0.2, abs=1e-15)
    assert binary_convolve(0.0, 0.3) == pytest.approx(0.3)
    assert binary_convolve(0.5, 0.3) == pytest.approx(0.5)


@pytest.mark.parametrize("seed", range(5))
def test_mutual_info_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    j = _random_joint(rng)
    ref = _enum_of(j)
    for a, b, c in [("A", "B", ""), ("A", "B C", "D"), ("B", "D", "A C"), ("A C", "D", "")]:
        assert mutual_info(j, a, b, c) == pytest.approx(ref.mi(a, b, c), abs=1e-12)
    assert conditional_entropy(j, "A", "B") == pytest.approx(ref.entropy(["A", "B"]) - ref.entropy(["B"]), abs=1e-12)


def test_zero_probability_cells_are_fine():
    p = np.zeros((2, 2))
    p[0, 0] = p[1, 1] = 0.5
    j = JointPmf(("X", "Y"), p)
    assert mutual_info(j, "X", "Y") == pytest.approx(1.0)
    assert conditional_entropy(j, "X", "Y") == 0.0


def test_independent_gives_zero_not_negative():
    p = np.outer([0.3, 0.7], [0.6, 0.4])
    assert mutual_info(JointPmf(("X", "Y"), p), "X", "Y") == 0.0


def test_conditioning_variable_dropped_from_sides():
    j = _random_joint(np.random.default_rng(3))
    assert mutual_info(j, "A C", "B", "C") == pytest.approx(mutual_info(j, "A", "B", "C"), abs=1e-14)


def test_overlap_and_unknown_names_raise():
    j = _random_joint(np.random.default_rng(4))
    with pytest.raises(StructuralError):
        mutual_info(j, "A B", "B", "")
    with pytest.raises(StructuralError):
        mutual_info(j, "A", "Z")


def test_joint_validation():
    with pytest.raises(StructuralError):
        JointPmf(("A",), np.array([0.5, 0.6]))
    with pytest.raises(StructuralError):
        JointPmf(("A", "A"), np.full((2, 2), 0.25))
    with pytest.raises(StructuralError):
        JointPmf(("A",), np.full((4,), 0.25).reshape(2, 2))


def test_marginal_orders_axes_as_requested():
    j = _random_joint(np.random.default_rng(5))
    m = j.marginal("D B")
    assert m.variables == ("D", "B")
    np.testing.assert_allclose(m.probs, j.probs.sum(axis=(0, 2)).T)


def test_channel_and_budget_validation():
    with pytest.raises(StructuralError):
        BroadcastChannel(np.full((2, 2, 2), 0.3))
    with pytest.raises(StructuralError):
        BroadcastChannel(np.full((2, 2), 0.5))
    with pytest.raises(DomainError):
        FeedbackBudget(-0.1, 0.0)
    ch = BroadcastChannel.from_marginals(np.eye(2), np.full((2, 3), 1 / 3))
    assert (ch.x_size, ch.y1_size, ch.y2_size) == (2, 2, 3)
    assert ch.swapped().y1_size == 3


def test_erasure_test_channel():
    t = Compression.erasure(1, 2, 0.25)
    np.testing.assert_allclose(t.table[0], [[0.25, 0, 0.75], [0, 0.25, 0.75]])


def _simple_scheme():
    aux = np.full((1, 2, 1, 2), 0.25)
    fmap = np.zeros((1, 2, 1, 2), dtype=int)
    fmap[0, :, 0, 1] = 1
    return SchemeSpec(np.array([1.0]), aux, fmap)


def test_assemble_joint_marginals():
    ch = BroadcastChannel.from_marginals(np.array([[0.9, 0.1], [0.2, 0.8]]), np.eye(2))
    j = assemble_joint(_simple_scheme(), ch)
    assert j.probs.sum() == pytest.approx(1.0)
    np.testing.assert_allclose(j.marginal("X").probs, [0.5, 0.5])
    np.testing.assert_allclose(j.marginal("X Y1").probs, 0.5 * ch.law.sum(axis=2))
    # absent tests and update give singleton alphabets
    assert j.size_of("Yt1") == j.size_of("Yt2") == j.size_of("V") == 1


def test_symbol_map_beyond_alphabet_rejected():
    ch = BroadcastChannel.from_marginals(np.eye(2), np.eye(2))
    s = _simple_scheme()
    bad = SchemeSpec(s.q_pmf, s.aux_pmf, s.symbol_map + 1)
    with pytest.raises(StructuralError):
        assemble_joint(bad, ch)


def test_tensor_cap():
    big = 2 ** 11
    with pytest.raises(StructuralError):
        JointPmf(("A", "B", "C"), np.full((big, big, 2), 1 / (big * big * 2)))
    assert MAX_TENSOR_ENTRIES == 2 ** 22


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_chain_rule_and_symmetry(seed):
    j = _random_joint(np.random.default_rng(seed), (2, 2, 3, 2))
    lhs = mutual_info(j, "A", "B C")
    rhs = mutual_info(j, "A", "B") + mutual_info(j, "A", "C", "B")
    assert lhs == pytest.approx(rhs, abs=1e-12)
    assert mutual_info(j, "A", "B", "D") == pytest.approx(mutual_info(j, "B", "A", "D"), abs=1e-14)
    assert 0.0 <= mutual_info(j, "A", "B D") <= math.log2(2) + 1e-12
