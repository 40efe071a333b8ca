"""Exact H-representations of the NBTS and classical correlation polytopes."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionMismatch, WrongPartyCount
from .linalg import rank
from .scenario import (
    CoordinateIndex,
    Scenario,
    TimingRegime,
    reference_inputs,
    to_fraction,
)

__all__ = [
    "CoordinateIndex",
    "LinearConstraint",
    "HPolytope",
    "normalization_constraints",
    "nbts_constraints",
    "classicality_constraints",
    "regime_classicality_constraints",
    "count_independent_classicality",
    "build_polytope",
]

EQ, GEQ = "eq", "geq"


@dataclass(frozen=True)
class LinearConstraint:
    """``Σ coeffs[k]·p_k  (= or >=)  rhs`` with sparse exact coefficients."""

    coeffs: tuple[tuple[int, Fraction], ...]
    rhs: Fraction
    relation: str = EQ

    def __post_init__(self):
        items = self.coeffs.items() if isinstance(self.coeffs, Mapping) else self.coeffs
        merged: dict[int, Fraction] = {}
        for k, v in items:
            merged[int(k)] = merged.get(int(k), Fraction(0)) + to_fraction(v)
        clean = tuple(sorted((k, v) for k, v in merged.items() if v != 0))
        if not clean:
            raise ValueError("constraint has no non-zero coefficient")
        if self.relation not in (EQ, GEQ):
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "rhs", to_fraction(self.rhs))

    @classmethod
    def build(cls, coeffs: Mapping[int, object], rhs=0, relation: str = EQ):
        """Like the constructor, but returns None when every coefficient cancels."""
        if all(to_fraction(v) == 0 for v in coeffs.values()):
            return None
        return cls(tuple(coeffs.items()), rhs, relation)

    @property
    def max_index(self) -> int:
        return self.coeffs[-1][0]

    def lhs(self, point: Sequence) -> Fraction:
        return sum((c * point[k] for k, c in self.coeffs), Fraction(0))

    def slack(self, point: Sequence) -> Fraction:
        return self.lhs(point) - self.rhs

    def satisfied(self, point: Sequence) -> bool:
        s = self.slack(point)
        return s == 0 if self.relation == EQ else s >= 0

    def dense(self, dim: int) -> list[Fraction]:
        row = [Fraction(0)] * dim
        for k, c in self.coeffs:
            row[k] = c
        return row

    def to_dict(self) -> dict:
        return {"c": {str(k): str(v) for k, v in self.coeffs}, "rhs": str(self.rhs)}

    @classmethod
    def from_dict(cls, data: dict, relation: str) -> "LinearConstraint":
        return cls(tuple((int(k), v) for k, v in data["c"].items()), data.get("rhs", 0), relation)


@dataclass(frozen=True)
class HPolytope:
    """Equalities and inequalities over the flat behavior coordinates."""

    ambient_dim: int
    equalities: tuple[LinearConstraint, ...] = ()
    inequalities: tuple[LinearConstraint, ...] = ()
    scenario: Scenario | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "equalities", tuple(self.equalities))
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        for c in self.equalities + self.inequalities:
            if c.max_index >= self.ambient_dim:
                raise DimensionMismatch(f"coefficient index {c.max_index} >= {self.ambient_dim}")
        if any(c.relation != EQ for c in self.equalities):
            raise ValueError("equalities must have relation 'eq'")
        if any(c.relation != GEQ for c in self.inequalities):
            raise ValueError("inequalities must have relation 'geq'")

    def violated(self, point: Sequence) -> list[LinearConstraint]:
        if len(point) != self.ambient_dim:
            raise DimensionMismatch(f"point has {len(point)} coordinates, need {self.ambient_dim}")
        return [c for c in self.equalities + self.inequalities if not c.satisfied(point)]

    def contains_point(self, point: Sequence) -> bool:
        return not self.violated(point)

    def equality_rows(self) -> list[list[Fraction]]:
        return [c.dense(self.ambient_dim) for c in self.equalities]

    def to_dict(self) -> dict:
        return {
            "dim": self.ambient_dim,
            "eq": [c.to_dict() for c in self.equalities],
            "geq": [c.to_dict() for c in self.inequalities],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "HPolytope":
        return cls(
            int(data["dim"]),
            tuple(LinearConstraint.from_dict(c, EQ) for c in data.get("eq", [])),
            tuple(LinearConstraint.from_dict(c, GEQ) for c in data.get("geq", [])),
        )

    @classmethod
    def from_json(cls, text: str) -> "HPolytope":
        return cls.from_dict(json.loads(text))


def normalization_constraints(s: Scenario) -> list[LinearConstraint]:
    """One equality Σ_a⃗ p(a⃗|x⃗) = 1 per input tuple."""
    idx = s.index
    outs = s.output_tuples()
    return [
        LinearConstraint(tuple((idx.flat(a, x), 1) for a in outs), 1)
        for x in s.input_tuples()
    ]


def _marginal_coeffs(s: Scenario, idx: CoordinateIndex, party: int, ai: int, x, sign: int, acc: dict):
    for a in s.output_tuples():
        if a[party] == ai:
            k = idx.flat(a, x)
            acc[k] = acc.get(k, 0) + sign


def nbts_constraints(s: Scenario, r: TimingRegime) -> list[LinearConstraint]:
    """Marginal-independence equalities for every party under regime ``r``.

    Each marginal at input tuple x⃗ is tied to its value at the reference
    tuple whose forbidden coordinates are zero, which spans all the regime's
    equalities without emitting every pair.
    """
    idx = s.index
    n = s.party_count
    out = []
    for party in range(n):
        forbidden = r.forbidden_inputs(party, n)
        for x in s.input_tuples():
            ref = reference_inputs(x, forbidden)
            if ref == x:
                continue
            for ai in range(s.outputs[party]):
                acc: dict[int, int] = {}
                _marginal_coeffs(s, idx, party, ai, x, 1, acc)
                _marginal_coeffs(s, idx, party, ai, ref, -1, acc)
                c = LinearConstraint.build(acc, 0)
                if c is not None:
                    out.append(c)
    return out


def classicality_constraints(s: Scenario) -> list[LinearConstraint]:
    """Every four-term equality p(ab|xy)+p(ab|x'y') - p(ab|xy') - p(ab|x'y) = 0.

    Instances with x = x' or y = y' cancel identically and are not emitted.
    """
    s.require_parties(2)
    idx = s.index
    X, Y = s.inputs
    out = []
    for a in s.output_tuples():
        for x, x2 in itertools.combinations(range(X), 2):
            for y, y2 in itertools.combinations(range(Y), 2):
                coeffs = {
                    idx.flat(a, (x, y)): 1,
                    idx.flat(a, (x2, y2)): 1,
                    idx.flat(a, (x, y2)): -1,
                    idx.flat(a, (x2, y)): -1,
                }
                out.append(LinearConstraint(tuple(coeffs.items()), 0))
    return out


def regime_classicality_constraints(s: Scenario, r: TimingRegime) -> list[LinearConstraint]:
    """Extra equalities obeyed by classical behaviors in regime ``r``.

    Indefinite timing uses the four-term equalities.  With definite timing
    the joint distribution must not depend on inputs chosen after both
    outputs exist: all inputs for parallel labs, and the later party's input
    for a sequential order.
    """
    s.require_parties(2)
    if r.tag == "indefinite":
        return classicality_constraints(s)
    forbidden = (0, 1) if r.tag == "parallel" else (r.order[-1],)
    idx = s.index
    out = []
    for x in s.input_tuples():
        ref = reference_inputs(x, forbidden)
        if ref == x:
            continue
        for a in s.output_tuples():
            out.append(LinearConstraint(((idx.flat(a, x), 1), (idx.flat(a, ref), -1)), 0))
    return out


def positivity_constraints(s: Scenario) -> list[LinearConstraint]:
    return [LinearConstraint(((k, 1),), 0, GEQ) for k in range(s.dim)]


def count_independent_classicality(s: Scenario) -> int:
    """Rank the four-term equalities add on top of normalization and indefinite NBTS."""
    s.require_parties(2)
    base = [c.dense(s.dim) for c in normalization_constraints(s) + nbts_constraints(s, TimingRegime.indefinite())]
    extra = [c.dense(s.dim) for c in classicality_constraints(s)]
    return rank(base + extra, s.dim) - rank(base, s.dim)


def build_polytope(s: Scenario, r: TimingRegime, classical: bool = False) -> HPolytope:
    """Positivity, normalization and NBTS(r), plus classicality when requested."""
    eqs = normalization_constraints(s) + nbts_constraints(s, r)
    if classical:
        if s.party_count != 2:
            raise WrongPartyCount("classical polytopes are defined for two parties only")
        eqs += regime_classicality_constraints(s, r)
    return HPolytope(s.dim, tuple(eqs), tuple(positivity_constraints(s)), scenario=s)


def affine_rank(constraints: Iterable[LinearConstraint], dim: int) -> int:
    return rank([c.dense(dim) for c in constraints], dim)
