"""Independent reference values: explicit enumeration of small joints with plain dicts.

Nothing here touches the package's entropy code, so agreement is a real check.
"""

from __future__ import annotations

import math
from itertools import product


class Enum:
    """A joint law as {outcome tuple: probability} over named coordinates."""

    def __init__(self, names: tuple[str, ...]) -> None:
        self.names = names
        self.p: dict[tuple, float] = {}

    def add(self, prob: float, **vals: int) -> None:
        if prob <= 0.0:
            return
        key = tuple(vals[n] for n in self.names)
        self.p[key] = self.p.get(key, 0.0) + prob

    def entropy(self, vars_: list[str]) -> float:
        idx = [self.names.index(v) for v in vars_]
        marg: dict[tuple, float] = {}
        for k, v in self.p.items():
            kk = tuple(k[i] for i in idx)
            marg[kk] = marg.get(kk, 0.0) + v
        return -sum(v * math.log2(v) for v in marg.values() if v > 0)

    def mi(self, a: str, b: str, c: str = "") -> float:
        A, B, C = a.split(), b.split(), c.split()
        return (self.entropy(A + C) + self.entropy(B + C)
                - self.entropy(A + B + C) - self.entropy(C))


def _flip(q: float, bit: int) -> float:
    return q if bit else 1.0 - q


def bsbc_joint(p1: float, p2: float, b1: float, b2: float) -> Enum:
    """U uniform, X = U ^ W1, Y_k = X ^ Z_k, Yt1 = Y1 ^ N."""
    j = Enum(("U", "X", "Y1", "Y2", "Yt1"))
    for u, w, z1, z2, n in product((0, 1), repeat=5):
        pr = 0.5 * _flip(b1, w) * _flip(p1, z1) * _flip(p2, z2) * _flip(b2, n)
        x = u ^ w
        j.add(pr, U=u, X=x, Y1=x ^ z1, Y2=x ^ z2, Yt1=x ^ z1 ^ n)
    return j


ERASED = 2


def bscbec_case1_joint(p: float, e: float, s: float, g: float) -> Enum:
    """U uniform, X = U ^ Bern(s), Y1 = BSC(p), Y2 = BEC(e), Yt1 keeps Y1 w.p. g."""
    j = Enum(("U", "X", "Y1", "Y2", "Yt1"))
    for u, w, z, er, keep in product((0, 1), repeat=5):
        x = u ^ w
        pr = 0.5 * _flip(s, w) * _flip(p, z) * _flip(e, er) * _flip(g, keep)
        y1 = x ^ z
        j.add(pr, U=u, X=x, Y1=y1, Y2=ERASED if er else x, Yt1=y1 if keep else ERASED)
    return j


def bscbec_case2_joint(p: float, e: float, a: float, g: float) -> Enum:
    """Q ~ Bern(a). Q=0 sends a uniform cloud bit U0; Q=1 a uniform private bit U1.
    Yt2 keeps Y2 with probability g when Q=1 and is the constant 3 otherwise."""
    j = Enum(("Q", "U0", "U1", "X", "Y1", "Y2", "Yt2"))
    for q, bit, z, er, keep in product((0, 1), repeat=5):
        u0, u1 = (bit, 0) if q == 0 else (0, bit)
        x = bit
        y2 = ERASED if er else x
        pr = _flip(a, q) * 0.5 * _flip(p, z) * _flip(e, er) * (_flip(g, keep) if q else 0.5)
        yt2 = y2 if (q and keep) else 3
        j.add(pr, Q=q, U0=u0, U1=u1, X=x, Y1=x ^ z, Y2=y2, Yt2=yt2)
    return j
