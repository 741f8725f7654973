"""Fourier–Motzkin elimination over named rate variables.

Coefficients are exact rationals, constants are floats. Systems are kept in
``a . x <= c`` form internally (``<`` for strict rows).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .geometry import GEOM_TOL, HalfPlane, Infeasible, RateRegion, vertices
from .info import JointPmf, mutual_info, StructuralError

RATE_VARS = ("R1", "R2", "Rc1", "Rc2", "Rp1", "Rp2", "Rprime1", "Rprime2",
             "Rtilde1", "Rtilde2", "Rhat1", "Rhat2", "RtildeV")

ELIMINATION_ORDER = ("Rhat1", "Rhat2", "RtildeV", "Rtilde1", "Rtilde2", "Rprime1", "Rprime2",
                     "Rp1", "Rp2", "Rc1", "Rc2")

SENSES = ("<=", "<", ">=", ">", "=")
FEASIBILITY_TOL = 1e-12


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: Mapping[str, Fraction]
    sense: str
    constant: float
    label: str = ""

    def __post_init__(self) -> None:
        if self.sense not in SENSES:
            raise ValueError(f"unknown sense {self.sense!r}")
        clean = {k: Fraction(v) for k, v in self.coeffs.items() if Fraction(v) != 0}
        object.__setattr__(self, "coeffs", clean)

    @property
    def strict(self) -> bool:
        return self.sense in ("<", ">")

    def lhs(self, point: Mapping[str, float]) -> float:
        return sum(float(c) * point[v] for v, c in self.coeffs.items())

    def satisfied(self, point: Mapping[str, float], tol: float = 0.0) -> bool:
        v = self.lhs(point)
        if self.sense in ("<=", "<"):
            return v <= self.constant + tol
        if self.sense in (">=", ">"):
            return v >= self.constant - tol
        return abs(v - self.constant) <= tol

    def as_upper(self) -> list["LinearConstraint"]:
        """Equivalent rows in ``<=`` / ``<`` form."""
        if self.sense in ("<=", "<"):
            return [self]
        neg = {k: -v for k, v in self.coeffs.items()}
        if self.sense == ">=":
            return [LinearConstraint(neg, "<=", -self.constant, self.label)]
        if self.sense == ">":
            return [LinearConstraint(neg, "<", -self.constant, self.label)]
        return [LinearConstraint(self.coeffs, "<=", self.constant, self.label),
                LinearConstraint(neg, "<=", -self.constant, self.label)]

    def __str__(self) -> str:
        terms = " ".join(f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}{v}"
                         for v, c in sorted(self.coeffs.items())) or "0"
        return f"{terms} {self.sense} {self.constant:.6g}  [{self.label}]"


@dataclass(frozen=True)
class LinearSystem:
    variables: tuple[str, ...]
    constraints: tuple[LinearConstraint, ...] = field(default_factory=tuple)

    def __init__(self, variables: Iterable[str], constraints: Iterable[LinearConstraint] = ()) -> None:
        vars_ = tuple(variables)
        if len(set(vars_)) != len(vars_):
            raise StructuralError("duplicate rate variables")
        cons = tuple(constraints)
        for c in cons:
            unknown = set(c.coeffs) - set(vars_)
            if unknown:
                raise StructuralError(f"constraint {c.label!r} references undeclared {sorted(unknown)}")
        object.__setattr__(self, "variables", vars_)
        object.__setattr__(self, "constraints", cons)

    def satisfied(self, point: Mapping[str, float], tol: float = 0.0) -> bool:
        return all(c.satisfied(point, tol) for c in self.constraints)

    def conditions(self) -> list[LinearConstraint]:
        """Rows without variables: pure conditions on the constants."""
        return [c for c in self.constraints if not c.coeffs]


def strict_to_weak(system: LinearSystem, epsilon: float = 0.0) -> LinearSystem:
    """Close every strict row; with epsilon > 0 the closed row is tightened by epsilon."""
    out = []
    for c in system.constraints:
        if c.sense == "<":
            out.append(LinearConstraint(c.coeffs, "<=", c.constant - epsilon, c.label))
        elif c.sense == ">":
            out.append(LinearConstraint(c.coeffs, ">=", c.constant + epsilon, c.label))
        else:
            out.append(c)
    return LinearSystem(system.variables, out)


def _nonnegative_vars(rows: Sequence[LinearConstraint]) -> set[str]:
    nn = set()
    for r in rows:
        if len(r.coeffs) == 1 and r.constant == 0.0:
            (v, c), = r.coeffs.items()
            if c < 0:
                nn.add(v)
    return nn


def _normalized(row: LinearConstraint) -> LinearConstraint:
    if not row.coeffs:
        return row
    scale = max(abs(c) for c in row.coeffs.values())
    if scale == 1:
        return row
    return LinearConstraint({k: v / scale for k, v in row.coeffs.items()}, row.sense,
                            row.constant / float(scale), row.label)


def _tighter(a: LinearConstraint, b: LinearConstraint) -> bool:
    """True if a implies b for identical coefficient vectors."""
    if a.constant != b.constant:
        return a.constant < b.constant
    return a.strict or not b.strict


def prune(rows: Iterable[LinearConstraint]) -> list[LinearConstraint]:
    """Remove duplicate and pairwise-dominated ``<=`` rows.

    Domination uses nonnegativity of variables that carry an explicit ``-x <= 0``
    row; those rows themselves are never removed.
    """
    best: dict[tuple, LinearConstraint] = {}
    conditions: list[LinearConstraint] = []
    for r in rows:
        r = _normalized(r)
        if not r.coeffs:
            conditions.append(r)
            continue
        key = tuple(sorted(r.coeffs.items()))
        cur = best.get(key)
        if cur is None or _tighter(r, cur):
            best[key] = r
    rows = list(best.values())
    nn = _nonnegative_vars(rows)
    keep: list[LinearConstraint] = []
    for j, rj in enumerate(rows):
        if len(rj.coeffs) == 1 and rj.constant == 0.0 and next(iter(rj.coeffs.values())) < 0:
            keep.append(rj)
            continue
        # implied by nonnegativity alone
        if (set(rj.coeffs) <= nn and all(c <= 0 for c in rj.coeffs.values())
                and (rj.constant > 0 or (rj.constant == 0 and not rj.strict))):
            continue
        dominated = False
        for i, ri in enumerate(rows):
            if i == j:
                continue
            ok = True
            for v in set(ri.coeffs) | set(rj.coeffs):
                d = ri.coeffs.get(v, 0) - rj.coeffs.get(v, 0)
                if d < 0 or (d > 0 and v not in nn):
                    ok = False
                    break
            if ok and (ri.constant < rj.constant or (ri.constant == rj.constant and (ri.strict or not rj.strict))):
                dominated = True
                break
        if not dominated:
            keep.append(rj)
    return keep + conditions


def eliminate(system: LinearSystem, var: str) -> LinearSystem:
    """Project out ``var``; the result's feasible set is the exact projection."""
    if var not in system.variables:
        raise StructuralError(f"{var} is not a variable of the system")
    rows = [u for c in system.constraints for u in c.as_upper()]
    pos, neg, rest = [], [], []
    for r in rows:
        c = r.coeffs.get(var, 0)
        (pos if c > 0 else neg if c < 0 else rest).append(r)
    combined = []
    for p in pos:
        ap = p.coeffs[var]
        for n in neg:
            an = -n.coeffs[var]
            coeffs: dict[str, Fraction] = {}
            for v, c in p.coeffs.items():
                coeffs[v] = coeffs.get(v, 0) + c / ap
            for v, c in n.coeffs.items():
                coeffs[v] = coeffs.get(v, 0) + c / an
            coeffs.pop(var, None)
            sense = "<" if (p.strict or n.strict) else "<="
            combined.append(LinearConstraint(coeffs, sense, p.constant / float(ap) + n.constant / float(an),
                                             f"{p.label}+{n.label}"))
    remaining = tuple(v for v in system.variables if v != var)
    return LinearSystem(remaining, prune(rest + combined))


@dataclass(frozen=True)
class Projection:
    """Result of a full projection, keeping every intermediate system for lifting."""

    order: tuple[str, ...]
    history: tuple[LinearSystem, ...]

    @property
    def final(self) -> LinearSystem:
        return self.history[-1]

    def lift(self, point: Mapping[str, float], tol: float = GEOM_TOL) -> dict[str, float] | None:
        """Witness values for the eliminated variables, or None if none is found."""
        values = dict(point)
        for k in range(len(self.order) - 1, -1, -1):
            var = self.order[k]
            lo, hi = -math.inf, math.inf
            for row in (u for c in self.history[k].constraints for u in c.as_upper()):
                a = row.coeffs.get(var, 0)
                if a == 0:
                    continue
                rest = row.constant - sum(float(c) * values[v] for v, c in row.coeffs.items() if v != var)
                if a > 0:
                    hi = min(hi, rest / float(a))
                else:
                    lo = max(lo, rest / float(a))
            if lo > hi + tol:
                return None
            if math.isinf(lo) and math.isinf(hi):
                values[var] = 0.0
            elif math.isinf(hi):
                values[var] = lo
            elif math.isinf(lo):
                values[var] = hi
            else:
                values[var] = 0.5 * (lo + hi) if lo <= hi else hi
        return values


def project(system: LinearSystem, order: Sequence[str]) -> Projection:
    history = [system]
    for v in order:
        history.append(eliminate(history[-1], v))
    return Projection(tuple(order), tuple(history))


def default_order(system: LinearSystem, keep: Sequence[str] = ("R1", "R2")) -> list[str]:
    order = [v for v in ELIMINATION_ORDER if v in system.variables and v not in keep]
    order += [v for v in system.variables if v not in keep and v not in order]
    return order


def system_to_region(system: LinearSystem, tol: float = FEASIBILITY_TOL) -> RateRegion:
    """Convert a closed system over (R1, R2) into a RateRegion.

    Violated constant rows raise Infeasible.
    """
    halfplanes = []
    for row in (u for c in system.constraints for u in c.as_upper()):
        if not row.coeffs:
            if row.constant < -tol:
                raise Infeasible(f"condition violated: {row.label} (slack {row.constant:.3e})")
            continue
        extra = set(row.coeffs) - {"R1", "R2"}
        if extra:
            raise StructuralError(f"variables {sorted(extra)} were not eliminated")
        halfplanes.append(HalfPlane(float(row.coeffs.get("R1", 0)), float(row.coeffs.get("R2", 0)),
                                    row.constant, row.label))
    region = RateRegion(halfplanes)
    vertices(region)
    return region


def project_to_rates(system: LinearSystem, order: Sequence[str] | None = None) -> RateRegion:
    """Close strict rows, eliminate everything except R1, R2 and return the region."""
    closed = strict_to_weak(system, 0.0)
    if order is None:
        order = default_order(closed)
    return system_to_region(project(closed, order).final)


# ---------------------------------------------------------------------------
# Fixtures: constraint systems whose constants are named information terms.

FIXTURES = ("appendix_a", "appendix_b", "appendix_c")


def load_fixture_spec(name_or_path: str) -> dict:
    if name_or_path in FIXTURES:
        text = resources.files("bcfb.fixtures").joinpath(f"{name_or_path}.json").read_text()
    else:
        with open(name_or_path) as fh:
            text = fh.read()
    return json.loads(text)


def _term_value(term: Mapping, joint: JointPmf, budget: tuple[float, float]) -> float:
    coef = float(term.get("coef", 1))
    if "info" in term:
        left, right, *given = term["info"]
        g = given[0] if given else ""
        # coded time-sharing: every term is conditioned on Q
        return coef * mutual_info(joint, left, right, g + " Q")
    if "budget" in term:
        return coef * budget[int(term["budget"]) - 1]
    raise StructuralError(f"unrecognized constant term {term!r}")


def instantiate(spec: Mapping, joint: JointPmf, r_fb1: float, r_fb2: float) -> LinearSystem:
    """Resolve every named information term of a fixture against ``joint``."""
    variables = list(spec["variables"])
    rows = []
    for c in spec["constraints"]:
        constant = sum(_term_value(t, joint, (r_fb1, r_fb2)) for t in c.get("rhs", []))
        coeffs = {k: Fraction(v) for k, v in c["lhs"].items()}
        rows.append(LinearConstraint(coeffs, c["sense"], constant, c.get("label", "")))
    nonneg = spec.get("nonnegative", [])
    if nonneg == "all":
        nonneg = variables
    for v in nonneg:
        rows.append(LinearConstraint({v: 1}, ">=", 0.0, f"{v}>=0"))
    return LinearSystem(variables, rows)


def fixture_region(name: str, joint: JointPmf, r_fb1: float, r_fb2: float,
                   order: Sequence[str] | None = None) -> RateRegion:
    return project_to_rates(instantiate(load_fixture_spec(name), joint, r_fb1, r_fb2), order)


def random_system(rng, n_vars: int = 8, n_rows: int = 14) -> LinearSystem:
    """Random bounded system with small integer coefficients (test helper)."""
    names = [f"x{i}" for i in range(n_vars)]
    rows = [LinearConstraint({v: 1}, ">=", 0.0, f"{v}>=0") for v in names]
    for k in range(n_rows):
        picks = rng.choice(n_vars, size=rng.integers(1, 4), replace=False)
        coeffs = {names[i]: int(rng.choice([-1, 1, 1, 2])) for i in picks}
        rows.append(LinearConstraint(coeffs, "<=", float(rng.uniform(0.2, 2.0)), f"r{k}"))
    rows.append(LinearConstraint({v: 1 for v in names}, "<=", 3.0, "total"))
    return LinearSystem(names, rows)

