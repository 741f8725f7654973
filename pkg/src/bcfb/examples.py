"""Closed-form regions for the example channels, with matching finite schemes.

The binary families (BSBC, BSC/BEC) come with builders that produce the exact
auxiliary choices behind each formula, so every closed form can be checked
against the generic evaluators in :mod:`bcfb.regions`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import HalfPlane, RateRegion
from .info import (BroadcastChannel, DomainError, SchemeSpec, TestChannel, TwoAuxSpec,
                   binary_convolve, binary_entropy, entropy_of)
from .regions import RegionVerdict

H = binary_entropy
conv = binary_convolve


def _in(name: str, x: float, lo: float, hi: float, *, open_lo: bool = False, open_hi: bool = False) -> None:
    bad = (x < lo or x > hi or (open_lo and x == lo) or (open_hi and x == hi)
           or not math.isfinite(x))
    if bad:
        lb = "(" if open_lo else "["
        rb = ")" if open_hi else "]"
        raise DomainError(f"{name}={x} outside {lb}{lo}, {hi}{rb}")


def bsc(p: float) -> np.ndarray:
    return np.array([[1 - p, p], [p, 1 - p]])


def bec(e: float) -> np.ndarray:
    """Binary erasure channel; output 2 is the erasure symbol."""
    return np.array([[1 - e, 0.0, e], [0.0, 1 - e, e]])


def _r1(b: float, name: str) -> HalfPlane:
    return HalfPlane(1.0, 0.0, b, name)


def _r2(b: float, name: str) -> HalfPlane:
    return HalfPlane(0.0, 1.0, b, name)


def _sum(b: float, name: str) -> HalfPlane:
    return HalfPlane(1.0, 1.0, b, name)


# ---------------------------------------------------------------------------
# Binary symmetric broadcast channel


@dataclass(frozen=True)
class BsbcParams:
    p1: float
    p2: float
    beta1: float = 0.0
    beta2: float = 0.0

    def __post_init__(self) -> None:
        _in("p1", self.p1, 0.0, 0.5)
        _in("p2", self.p2, 0.0, 0.5)
        _in("beta1", self.beta1, 0.0, 0.5)
        _in("beta2", self.beta2, 0.0, 0.5)


def bsbc_channel(p1: float, p2: float) -> BroadcastChannel:
    return BroadcastChannel.from_marginals(bsc(p1), bsc(p2))


def bsbc_alphas(params: BsbcParams) -> tuple[float, float, float, float]:
    p1, p2, b1 = params.p1, params.p2, params.beta1
    t = conv(p1, params.beta2)
    q2, c1 = 1 - p2, 1 - b1
    return (
        t * p2 * b1 + (1 - t) * q2 * c1,
        t * q2 * b1 + (1 - t) * p2 * c1,
        t * q2 * c1 + (1 - t) * p2 * b1,
        t * p2 * c1 + (1 - t) * q2 * b1,
    )


def bsbc_terms(params: BsbcParams) -> dict[str, float]:
    """Information terms of the U xor W1 / Y1 xor W2 choice, in bits."""
    h_alpha = entropy_of(np.array(bsbc_alphas(params)))
    return {
        "I(U;Y1)": 1 - H(conv(params.beta1, params.p1)),
        "I(X;Y2)": 1 - H(params.p2),
        "I(X;Yt1,Y2|U)": h_alpha - H(params.p2) - H(conv(params.beta2, params.p1)),
        "I(Yt1;Y1|Y2,U)": h_alpha - H(conv(params.beta1, params.p2)) - H(params.beta2),
    }


def bsbc_region(params: BsbcParams, r_fb1: float) -> RegionVerdict:
    t = bsbc_terms(params)
    hs = (
        _r1(t["I(U;Y1)"], "33a"),
        _sum(t["I(U;Y1)"] + t["I(X;Yt1,Y2|U)"], "33b"),
        _sum(t["I(X;Y2)"] - t["I(Yt1;Y1|Y2,U)"], "33c"),
    )
    return RegionVerdict(hs, (("34", r_fb1 - t["I(Yt1;Y1|Y2,U)"]),))


def bsbc_nofb(p1: float, p2: float, beta: float) -> RateRegion:
    """Superposition region with X = U xor Bern(beta), U uniform."""
    return RateRegion([
        _r1(1 - H(conv(beta, p1)), "sp-r1"),
        _r2(H(conv(beta, p2)) - H(p2), "sp-r2"),
        _sum(1 - H(p2), "sp-sum"),
    ])


def xor_twoaux(beta: float) -> TwoAuxSpec:
    """U ~ Bern(1/2), X = U xor Bern(beta)."""
    return TwoAuxSpec.from_u([0.5, 0.5], bsc(beta))


def bsbc_twoaux(params: BsbcParams) -> TwoAuxSpec:
    return xor_twoaux(params.beta1)


def bsbc_test1(params: BsbcParams) -> TestChannel:
    return TestChannel(bsc(params.beta2)[None, :, :], "y")


# ---------------------------------------------------------------------------
# BSC to receiver 1, BEC to receiver 2


@dataclass(frozen=True)
class BscBecParams:
    p: float
    e: float
    s: float = 0.0
    alpha: float = 0.5
    gamma: float = 0.5

    def __post_init__(self) -> None:
        _in("p", self.p, 0.0, 0.5, open_lo=True, open_hi=True)
        _in("e", self.e, 0.0, 1.0, open_lo=True, open_hi=True)
        _in("s", self.s, 0.0, 0.5)
        _in("alpha", self.alpha, 0.0, 1.0)
        _in("gamma", self.gamma, 0.0, 1.0)

    @property
    def case(self) -> int:
        hp = H(self.p)
        if self.e < hp:
            return 1
        if self.e > hp:
            return 2
        raise DomainError("e equals H_b(p); neither case applies")


def bscbec_channel(p: float, e: float) -> BroadcastChannel:
    return BroadcastChannel.from_marginals(bsc(p), bec(e))


def bscbec_nofb(params: BscBecParams) -> RateRegion:
    """No-feedback capacity region piece for the parameter ``s`` (case 1) or ``alpha`` (case 2)."""
    p, e = params.p, params.e
    if params.case == 1:
        return RateRegion([
            _r1(1 - H(conv(params.s, p)), "nofb-r1"),
            _r2((1 - e) * H(params.s), "nofb-r2"),
            _sum(1 - e, "nofb-sum"),
        ])
    return RateRegion([
        _r1(params.alpha * (1 - H(p)), "ts-r1"),
        _r2((1 - params.alpha) * (1 - e), "ts-r2"),
    ])


def bscbec_case1(params: BscBecParams, r_fb1: float) -> RegionVerdict:
    if params.case != 1:
        raise DomainError("case 1 needs 0 < e < H_b(p)")
    p, e, s, g = params.p, params.e, params.s, params.gamma
    hsp = H(conv(s, p))
    wz = g * (H(p) * (1 - e) + e * hsp)
    hs = (
        _r1(1 - hsp, "38a"),
        _sum(1 - hsp + (1 - e) * H(s) + g * e * (hsp - H(p)), "38b"),
        _sum(1 - e - wz, "38c"),
    )
    return RegionVerdict(hs, (("36", r_fb1 - wz),))


def bscbec_case2(params: BscBecParams, r_fb2: float) -> RegionVerdict:
    """Index-swapped hybrid region for 0 < H_b(p) < e < 1.

    Besides the three printed constraints this includes R2 <= (1-alpha)(1-e), the
    cloud-center bound of the underlying region, and the last constraint carries
    the penalty alpha*gamma*H_b(e); both are what the auxiliary choice yields.
    """
    if params.case != 2:
        raise DomainError("case 2 needs 0 < H_b(p) < e < 1")
    p, e, a, g = params.p, params.e, params.alpha, params.gamma
    gain = a * (1 - e) * g * H(p)
    hs = (
        _r1(a * (1 - H(p)) + gain, "43a"),
        _r2((1 - a) * (1 - e), "43-cloud"),
        _sum((1 - a) * (1 - e) + a * (1 - H(p)) + gain, "43b"),
        _sum(1 - H(p) - a * g * H(e), "43c"),
    )
    fb = a * g * ((1 - e) * H(p) + H(e))
    return RegionVerdict(hs, (("42", r_fb2 - fb),))


def _s0_fn(s: float, p: float, e: float) -> float:
    return 1 - H(conv(s, p)) + (1 - e) * H(s) - (1 - e)


def bscbec_s0(p: float, e: float, tol: float = 1e-10) -> float:
    """Largest s in (0, 1/2] up to which the single-rate constraints alone are active.

    The defining function is negative at s -> 0 and vanishes at s = 1/2; it has an
    interior root only when e > 4p(1-p). Otherwise every s < 1/2 qualifies and 1/2
    is returned.
    """
    if BscBecParams(p, e).case != 1:
        raise DomainError("s0 is defined for 0 < e < H_b(p)")
    if e <= 4 * p * (1 - p):
        return 0.5
    # g > 0 just below 1/2; shrink the offset until the sign is visible
    t = 0.25
    while _s0_fn(0.5 - t, p, e) <= 0:
        t /= 2
        if t < tol:
            return 0.5
    lo, hi = 0.0, 0.5 - t
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _s0_fn(mid, p, e) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bscbec_case1_twoaux(params: BscBecParams) -> TwoAuxSpec:
    return xor_twoaux(params.s)


def bscbec_case1_test1(params: BscBecParams) -> TestChannel:
    return TestChannel.erasure(1, 2, params.gamma)


def bscbec_case2_scheme(params: BscBecParams) -> SchemeSpec:
    """Time-shared scheme: Q=0 (prob 1-alpha) sends a cloud bit to receiver 2,
    Q=1 (prob alpha) sends a private bit to receiver 1 with receiver 2's output
    passed through an erasure test channel of keep probability gamma.

    Alphabets: U0 = cloud, U1 = receiver-1 satellite (= X), U2 constant.
    """
    a, g = params.alpha, params.gamma
    aux = np.zeros((2, 2, 2, 1))
    aux[0, 0, 0, 0] = aux[0, 1, 1, 0] = 0.5
    aux[1, 0, 0, 0] = aux[1, 0, 1, 0] = 0.5
    fmap = np.zeros((2, 2, 2, 1), dtype=int)
    fmap[:, :, 1, :] = 1
    t2 = np.zeros((2, 3, 4))
    t2[0, :, 3] = 1.0
    for y in range(3):
        t2[1, y, y] = g
        t2[1, y, 3] = 1 - g
    return SchemeSpec(np.array([1 - a, a]), aux, fmap, test2=TestChannel(t2, "y"))


# ---------------------------------------------------------------------------
# Gaussian broadcast channel (closed forms only)


def gaussian_c(x: float) -> float:
    """C(x) = 1/2 log2(1 + x)."""
    if x < 0:
        raise DomainError("C(x) needs x >= 0")
    return 0.5 * math.log2(1.0 + x)


@dataclass(frozen=True)
class GaussianParams:
    P: float
    N1: float
    N2: float
    alpha: float = 0.5
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not (0 < self.N2 < self.N1 < self.P):
            raise DomainError("need 0 < N2 < N1 < P")
        _in("alpha", self.alpha, 0.0, 1.0)
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise DomainError("beta must be positive and finite")


def gaussian_terms(g: GaussianParams) -> dict[str, float]:
    P, N1, N2, a, b = g.P, g.N1, g.N2, g.alpha, g.beta
    return {
        "I(U;Y1)": gaussian_c((1 - a) * P / (a * P + N1)),
        "I(X;Y2)": gaussian_c(P / N2),
        "I(X;Y2,Yt1|U)": gaussian_c(a * P / N2) + gaussian_c(a * P * N2 / ((a * P + N2) * (N1 + b))),
        "I(Yt1;Y1|Y2,U)": gaussian_c((a * P * (N1 + N2) + N1 * N2) / (b * (N2 + a * P))),
    }


def gaussian_region(g: GaussianParams, r_fb1: float) -> RegionVerdict:
    t = gaussian_terms(g)
    hs = (
        _r1(t["I(U;Y1)"], "46a"),
        _sum(t["I(U;Y1)"] + t["I(X;Y2,Yt1|U)"], "46b"),
        _sum(t["I(X;Y2)"] - t["I(Yt1;Y1|Y2,U)"], "46c"),
    )
    return RegionVerdict(hs, (("47", r_fb1 - t["I(Yt1;Y1|Y2,U)"]),))


def gaussian_nofb(P: float, N1: float, N2: float, alpha: float) -> RateRegion:
    """Superposition region with U ~ N(0, (1-alpha)P) and satellite power alpha*P."""
    return RateRegion([
        _r1(gaussian_c((1 - alpha) * P / (alpha * P + N1)), "sp-r1"),
        _r2(gaussian_c(alpha * P / N2), "sp-r2"),
        _sum(gaussian_c(P / N2), "sp-sum"),
    ])


def gaussian_enhanced(P: float, N1: float, N2: float, alpha: float) -> RateRegion:
    """Enhanced-receiver bound for the same Gaussian auxiliaries (receiver 2 also sees Y1)."""
    return RateRegion([
        _r1(gaussian_c((1 - alpha) * P / (alpha * P + N1)), "enh-r1"),
        _r2(gaussian_c(alpha * P * (1 / N1 + 1 / N2)), "enh-r2"),
    ])


def quantized_awgn_mi(signal_var: float, noise_var: float, levels: int = 64,
                      out_points: int = 4001) -> float:
    """I(A; A + N) in bits for a ``levels``-point discretized Gaussian input A.

    A takes equally spaced values on +-4 standard deviations with Gaussian-shaped
    masses; N is Gaussian. The output entropy is integrated on a uniform grid.
    """
    if signal_var <= 0:
        return 0.0
    sd = math.sqrt(signal_var)
    pts = np.linspace(-4 * sd, 4 * sd, levels)
    w = np.exp(-0.5 * (pts / sd) ** 2)
    w /= w.sum()
    ns = math.sqrt(noise_var)
    span = 4 * sd + 9 * ns
    y = np.linspace(-span, span, out_points)
    dy = y[1] - y[0]
    dens = (w[:, None] * np.exp(-0.5 * ((y[None, :] - pts[:, None]) / ns) ** 2)).sum(axis=0)
    dens /= ns * math.sqrt(2 * math.pi)
    mask = dens > 0
    h_y = -float(np.sum(dens[mask] * np.log2(dens[mask]))) * dy
    h_n = 0.5 * math.log2(2 * math.pi * math.e * noise_var)
    return h_y - h_n


def gaussian_enhanced_quantized(P: float, N1: float, N2: float, alpha: float,
                                levels: int = 64) -> tuple[float, float]:
    """Quantized-input surrogate for the two enhanced-bound terms.

    Receiver 1 sees the cloud through noise alpha*P + N1; the enhanced receiver 2
    combines both outputs, which is a single channel with noise (1/N1 + 1/N2)^-1.
    """
    r1 = quantized_awgn_mi((1 - alpha) * P, alpha * P + N1, levels)
    r2 = quantized_awgn_mi(alpha * P, 1.0 / (1.0 / N1 + 1.0 / N2), levels)
    return r1, r2


# ---------------------------------------------------------------------------
# Blackwell channel with a uniform state known at both receivers


def blackwell_channel() -> BroadcastChannel:
    """Outputs are indexed 2*S + Y*, so |Y1| = |Y2| = 4 and |X| = 3."""
    law = np.zeros((3, 4, 4))
    for x in range(3):
        # S = 0: reversed Blackwell channel
        y1, y2 = int(x != 0), int(x == 1)
        law[x, y1, y2] += 0.5
        # S = 1: standard Blackwell channel
        y1, y2 = int(x == 1), int(x != 0)
        law[x, 2 + y1, 2 + y2] += 0.5
    return BroadcastChannel(law)


def blackwell_nofb_sum() -> float:
    """Largest no-feedback sum rate of the Blackwell channel with state."""
    return 1.0


BLACKWELL_REFERENCE = ((0.5958, 0.5958), (0.6103, 0.6103))


def blackwell_scheme(p: float, pmf0: np.ndarray, pmf1: np.ndarray, pmf2: np.ndarray,
                     pattern: tuple[tuple[bool, bool], tuple[bool, bool]]) -> SchemeSpec:
    """Coded time sharing with Q in {0, 1, 2}, P(Q=1) = P(Q=2) = p and X = U_Q.

    ``pattern[k]`` says, for Q = k+1, whether (Yt1, Yt2) equal the outputs (True)
    or are constant (False). Both are constant when Q = 0, so every test channel
    is a deterministic function of (Y_i, Q).
    """
    _in("p", p, 0.0, 0.5)
    pm = [np.asarray(v, dtype=float) for v in (pmf0, pmf1, pmf2)]
    prod = np.einsum("a,b,c->abc", *pm)
    aux = np.broadcast_to(prod, (3, 3, 3, 3)).copy()
    u0, u1, u2 = np.meshgrid(np.arange(3), np.arange(3), np.arange(3), indexing="ij")
    fmap = np.stack([u0, u1, u2])
    t1 = np.zeros((3, 4, 4))
    t2 = np.zeros((3, 4, 4))
    flags = ((False, False),) + tuple(pattern)
    for q, (f1, f2) in enumerate(flags):
        t1[q] = np.eye(4) if f1 else np.eye(4)[[0, 0, 0, 0]]
        t2[q] = np.eye(4) if f2 else np.eye(4)[[0, 0, 0, 0]]
    return SchemeSpec(np.array([1 - 2 * p, p, p]), aux, fmap, TestChannel(t1, "y"), TestChannel(t2, "y"))
