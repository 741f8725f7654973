"""Finite-alphabet probability objects and entropy / mutual-information computations.

All logarithms are base 2, so every quantity is in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

PROB_TOL = 1e-12
JOINT_TOL = 1e-11
MAX_TENSOR_ENTRIES = 2**22

# Canonical ordering of every variable an assembled joint may carry.
CANONICAL_VARS = ("Q", "U0", "U1", "U2", "X", "Y1", "Y2", "Yt1", "Yt2", "V")


class StructuralError(ValueError):
    """Inconsistent shapes, unknown variables or a malformed scheme."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a function."""


def binary_entropy(p: float) -> float:
    """H_b(p) in bits with 0 log 0 = 0."""
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"probability out of range: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def binary_convolve(a: float, b: float) -> float:
    """a * b = (1-a) b + a (1-b)."""
    for v in (a, b):
        if not (0.0 <= v <= 1.0):
            raise DomainError(f"probability out of range: {v}")
    return (1.0 - a) * b + a * (1.0 - b)


def entropy_of(probs: np.ndarray) -> float:
    """Shannon entropy of a flattened probability array."""
    p = np.asarray(probs, dtype=float).ravel()
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p)))


def _check_stochastic(name: str, table: np.ndarray, axes: tuple[int, ...]) -> None:
    if np.any(table < -PROB_TOL):
        raise StructuralError(f"{name}: negative entries")
    sums = table.sum(axis=axes)
    if not np.allclose(sums, 1.0, atol=PROB_TOL, rtol=0.0):
        worst = float(np.max(np.abs(sums - 1.0)))
        raise StructuralError(f"{name}: conditional slices do not sum to 1 (max error {worst:.3e})")


@dataclass(frozen=True)
class Pmf:
    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise StructuralError("Pmf needs a nonempty vector")
        _check_stochastic("Pmf", p, (0,))
        object.__setattr__(self, "probs", p)

    @property
    def alphabet_size(self) -> int:
        return int(self.probs.size)


@dataclass(frozen=True)
class BroadcastChannel:
    """Conditional law P(y1, y2 | x) stored as a (|X|, |Y1|, |Y2|) tensor."""

    law: np.ndarray

    def __post_init__(self) -> None:
        law = np.asarray(self.law, dtype=float)
        if law.ndim != 3:
            raise StructuralError("channel law must have shape (x, y1, y2)")
        _check_stochastic("BroadcastChannel", law, (1, 2))
        object.__setattr__(self, "law", law)

    @property
    def x_size(self) -> int:
        return self.law.shape[0]

    @property
    def y1_size(self) -> int:
        return self.law.shape[1]

    @property
    def y2_size(self) -> int:
        return self.law.shape[2]

    @classmethod
    def from_marginals(cls, w1: np.ndarray, w2: np.ndarray) -> "BroadcastChannel":
        """Channel whose outputs are conditionally independent given X."""
        w1 = np.asarray(w1, dtype=float)
        w2 = np.asarray(w2, dtype=float)
        return cls(np.einsum("xa,xb->xab", w1, w2))

    def swapped(self) -> "BroadcastChannel":
        """Same channel with the receiver labels exchanged."""
        return BroadcastChannel(np.transpose(self.law, (0, 2, 1)).copy())


@dataclass(frozen=True)
class FeedbackBudget:
    r_fb1: float = 0.0
    r_fb2: float = 0.0

    def __post_init__(self) -> None:
        if self.r_fb1 < 0 or self.r_fb2 < 0:
            raise DomainError("feedback rates must be nonnegative")

    def swapped(self) -> "FeedbackBudget":
        return FeedbackBudget(self.r_fb2, self.r_fb1)


@dataclass(frozen=True)
class TestChannel:
    """Compression test channel of one receiver.

    ``form`` is ``"y"`` for P(yt | y, q), table shape (|Q|, |Y|, |Yt|), or
    ``"y_u0"`` for P(yt | y, u0, q), table shape (|Q|, |U0|, |Y|, |Yt|).
    """

    table: np.ndarray
    form: str = "y"

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=float)
        if self.form == "y":
            if t.ndim != 3:
                raise StructuralError("test channel of form 'y' needs shape (q, y, yt)")
        elif self.form == "y_u0":
            if t.ndim != 4:
                raise StructuralError("test channel of form 'y_u0' needs shape (q, u0, y, yt)")
        else:
            raise StructuralError(f"unknown test channel form {self.form!r}")
        _check_stochastic("TestChannel", t, (t.ndim - 1,))
        object.__setattr__(self, "table", t)

    @property
    def out_size(self) -> int:
        return self.table.shape[-1]

    @classmethod
    def identity(cls, nq: int, ny: int) -> "TestChannel":
        return cls(np.broadcast_to(np.eye(ny), (nq, ny, ny)).copy(), "y")

    @classmethod
    def constant(cls, nq: int, ny: int) -> "TestChannel":
        return cls(np.ones((nq, ny, 1)), "y")

    @classmethod
    def erasure(cls, nq: int, ny: int, keep: float) -> "TestChannel":
        """Pass Y through with probability ``keep``, else emit the extra symbol ny."""
        t = np.zeros((nq, ny, ny + 1))
        for y in range(ny):
            t[:, y, y] = keep
            t[:, y, ny] = 1.0 - keep
        return cls(t, "y")


@dataclass(frozen=True)
class SchemeSpec:
    """Auxiliary coding choice for the Marton-type feedback schemes.

    aux_pmf[q, u0, u1, u2] = P(u0, u1, u2 | q); symbol_map[q, u0, u1, u2] = x.
    ``update`` (processed-update regions only) is P(v | u0, u1, u2, yt1, yt2).
    """

    q_pmf: np.ndarray
    aux_pmf: np.ndarray
    symbol_map: np.ndarray
    test1: TestChannel | None = None
    test2: TestChannel | None = None
    update: np.ndarray | None = None

    def __post_init__(self) -> None:
        q = np.asarray(self.q_pmf, dtype=float)
        aux = np.asarray(self.aux_pmf, dtype=float)
        fmap = np.asarray(self.symbol_map)
        if q.ndim != 1:
            raise StructuralError("q_pmf must be a vector")
        _check_stochastic("q_pmf", q, (0,))
        if aux.ndim != 4 or aux.shape[0] != q.size:
            raise StructuralError("aux_pmf must have shape (q, u0, u1, u2)")
        _check_stochastic("aux_pmf", aux, (1, 2, 3))
        if fmap.shape != aux.shape:
            raise StructuralError("symbol_map must be total over (q, u0, u1, u2)")
        if not np.issubdtype(fmap.dtype, np.integer):
            if not np.all(np.equal(np.mod(fmap, 1), 0)):
                raise StructuralError("symbol_map entries must be integers")
            fmap = fmap.astype(int)
        if np.any(fmap < 0):
            raise StructuralError("symbol_map entries must be nonnegative")
        object.__setattr__(self, "q_pmf", q)
        object.__setattr__(self, "aux_pmf", aux)
        object.__setattr__(self, "symbol_map", fmap)
        if self.update is not None:
            upd = np.asarray(self.update, dtype=float)
            if upd.ndim != 6:
                raise StructuralError("update must have shape (u0, u1, u2, yt1, yt2, v)")
            _check_stochastic("update", upd, (5,))
            object.__setattr__(self, "update", upd)

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return tuple(int(s) for s in self.aux_pmf.shape)  # type: ignore[return-value]


@dataclass(frozen=True)
class TwoAuxSpec:
    """P(u, v, x); pass a (|U|, 1, |X|) tensor for the single-auxiliary form P(u, x)."""

    pmf: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.pmf, dtype=float)
        if p.ndim == 2:
            p = p[:, None, :]
        if p.ndim != 3:
            raise StructuralError("TwoAuxSpec pmf must have shape (u, v, x) or (u, x)")
        _check_stochastic("TwoAuxSpec", p, (0, 1, 2))
        object.__setattr__(self, "pmf", p)

    @classmethod
    def from_u(cls, p_u: Sequence[float], p_x_given_u: np.ndarray) -> "TwoAuxSpec":
        p_u = np.asarray(p_u, dtype=float)
        cond = np.asarray(p_x_given_u, dtype=float)
        return cls((p_u[:, None] * cond)[:, None, :])


def _names(vs: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(vs, str):
        return tuple(vs.split())
    return tuple(vs)


@dataclass(frozen=True, eq=False)
class JointPmf:
    variables: tuple[str, ...]
    probs: np.ndarray
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        vars_ = tuple(self.variables)
        if p.ndim != len(vars_):
            raise StructuralError("one tensor axis per variable required")
        if len(set(vars_)) != len(vars_):
            raise StructuralError("duplicate variable names")
        if p.size > MAX_TENSOR_ENTRIES:
            raise StructuralError(f"joint has {p.size} entries, above the cap {MAX_TENSOR_ENTRIES}")
        if np.any(p < -PROB_TOL) or abs(float(p.sum()) - 1.0) > JOINT_TOL:
            raise StructuralError("joint must be a probability tensor")
        object.__setattr__(self, "variables", vars_)
        object.__setattr__(self, "probs", p)

    def size_of(self, name: str) -> int:
        return self.probs.shape[self.axis(name)]

    def axis(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise StructuralError(f"unknown variable {name!r}; joint has {self.variables}") from None

    def marginal(self, names: str | Iterable[str]) -> "JointPmf":
        keep = _names(names)
        axes = [self.axis(n) for n in keep]
        drop = tuple(i for i in range(len(self.variables)) if i not in axes)
        m = self.probs.sum(axis=drop) if drop else self.probs
        # sum keeps remaining axes in original order; permute to the requested order
        order = sorted(axes)
        perm = [order.index(a) for a in axes]
        return JointPmf(keep, np.transpose(m, perm))

    def entropy(self, names: str | Iterable[str]) -> float:
        """Joint entropy of a variable subset; singleton-alphabet variables are dropped."""
        keep = frozenset(n for n in _names(names) if self.size_of(n) > 1)
        cached = self._cache.get(keep)
        if cached is not None:
            return cached
        if not keep:
            value = 0.0
        else:
            drop = tuple(i for i, n in enumerate(self.variables) if n not in keep)
            value = entropy_of(self.probs.sum(axis=drop) if drop else self.probs)
        self._cache[keep] = value
        return value

    def rename(self, mapping: dict[str, str]) -> "JointPmf":
        return JointPmf(tuple(mapping.get(v, v) for v in self.variables), self.probs)

    def with_variable(self, name: str, table: np.ndarray, parents: Sequence[str]) -> "JointPmf":
        """Append a variable drawn from P(name | parents); ``table`` has shape parents + (size,)."""
        table = np.asarray(table, dtype=float)
        par_axes = [self.axis(p) for p in parents]
        shape = [1] * len(self.variables) + [table.shape[-1]]
        order = sorted(range(len(parents)), key=lambda k: par_axes[k])
        t = np.transpose(table, order + [len(parents)])
        for k, ax in enumerate(sorted(par_axes)):
            shape[ax] = t.shape[k]
        probs = self.probs[..., None] * t.reshape(shape)
        return JointPmf(self.variables + (name,), probs)


def mutual_info(joint: JointPmf, left: str | Iterable[str], right: str | Iterable[str],
                given: str | Iterable[str] = ()) -> float:
    """I(left; right | given) in bits, clamped at zero.

    Variables that also appear in ``given`` are removed from ``left``/``right``
    (I(A,C;B|C) = I(A;B|C)).
    """
    g = set(_names(given))
    a = set(_names(left)) - g
    b = set(_names(right)) - g
    for n in a | b | g:
        joint.axis(n)
    if a & b:
        raise StructuralError(f"left and right overlap: {sorted(a & b)}")
    if not a or not b:
        return 0.0
    value = (joint.entropy(a | g) + joint.entropy(b | g)
             - joint.entropy(a | b | g) - joint.entropy(g))
    return max(value, 0.0)


def conditional_entropy(joint: JointPmf, target: str | Iterable[str],
                        given: str | Iterable[str] = ()) -> float:
    t = set(_names(target))
    g = set(_names(given))
    return max(joint.entropy(t | g) - joint.entropy(g), 0.0)


def assemble_joint(scheme: SchemeSpec, channel: BroadcastChannel) -> JointPmf:
    """Joint of (Q, U0, U1, U2, X, Y1, Y2, Yt1, Yt2, V) induced by a scheme and a channel.

    Absent test channels and an absent update channel yield singleton variables.
    """
    nq, n0, n1, n2 = scheme.sizes
    nx, ny1, ny2 = channel.law.shape
    if int(scheme.symbol_map.max()) >= nx:
        raise StructuralError(f"symbol_map uses inputs beyond |X|={nx}")

    def test(tc: TestChannel | None, ny: int, label: str) -> np.ndarray:
        if tc is None:
            return np.ones((nq, n0, ny, 1))
        t = tc.table
        if tc.form == "y":
            if t.shape[:2] != (nq, ny):
                raise StructuralError(f"{label}: expected leading shape {(nq, ny)}, got {t.shape[:2]}")
            return np.broadcast_to(t[:, None, :, :], (nq, n0, ny, t.shape[-1]))
        if t.shape[:3] != (nq, n0, ny):
            raise StructuralError(f"{label}: expected leading shape {(nq, n0, ny)}, got {t.shape[:3]}")
        return t

    t1 = test(scheme.test1, ny1, "test1")
    t2 = test(scheme.test2, ny2, "test2")
    nt1, nt2 = t1.shape[-1], t2.shape[-1]
    if scheme.update is not None:
        upd = scheme.update
        if upd.shape[:5] != (n0, n1, n2, nt1, nt2):
            raise StructuralError(f"update: expected leading shape {(n0, n1, n2, nt1, nt2)}, got {upd.shape[:5]}")
    else:
        upd = np.ones((n0, n1, n2, nt1, nt2, 1))
    nv = upd.shape[-1]

    total = nq * n0 * n1 * n2 * nx * ny1 * ny2 * nt1 * nt2 * nv
    if total > MAX_TENSOR_ENTRIES:
        raise StructuralError(f"joint would have {total} entries, above the cap {MAX_TENSOR_ENTRIES}")

    onehot = np.zeros((nq, n0, n1, n2, nx))
    np.put_along_axis(onehot, scheme.symbol_map[..., None], 1.0, axis=-1)
    base = scheme.q_pmf[:, None, None, None] * scheme.aux_pmf
    probs = np.einsum("qabc,qabcx,xyz,qays,qazt,abcstv->qabcxyzstv",
                      base, onehot, channel.law, t1, t2, upd, optimize=True)
    return JointPmf(CANONICAL_VARS, probs)


def assemble_twoaux(twoaux: TwoAuxSpec, channel: BroadcastChannel) -> JointPmf:
    """Joint of (U, V, X, Y1, Y2) for the two-auxiliary outer-bound forms."""
    if twoaux.pmf.shape[2] != channel.x_size:
        raise StructuralError("TwoAuxSpec input alphabet does not match the channel")
    probs = np.einsum("uvx,xyz->uvxyz", twoaux.pmf, channel.law)
    return JointPmf(("U", "V", "X", "Y1", "Y2"), probs)
