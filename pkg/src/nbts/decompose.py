"""Constructive convex decomposition of classical behaviors (indefinite timing).

Repeatedly take the smallest non-zero probability ε at (a*, b*, x*, y*),
choose a deterministic classical strategy that puts weight on that entry
and is dominated entrywise by ε, and peel it off.  Every peel zeroes at
least one further entry, so the loop ends after at most A·B·X·Y steps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InternalContradiction, PreconditionFailed, ScenarioMismatch, WrongPartyCount
from .scenario import (
    Behavior,
    Scenario,
    TimingRegime,
    check_classicality_equalities,
    check_nbts,
    to_fraction,
)

BOTH_CONST, A_BEFORE_B, B_BEFORE_A = "both_const", "A_before_B", "B_before_A"


@dataclass(frozen=True)
class ClassicalVertex:
    """Deterministic classical strategy.

    ``both_const``: a = alpha, b = beta.  ``A_before_B``: a = alpha,
    b = beta_x[x].  ``B_before_A``: a = alpha_y[y], b = beta.
    """

    family: str
    alpha: int | None = None
    beta: int | None = None
    beta_x: tuple[int, ...] | None = None
    alpha_y: tuple[int, ...] | None = None

    def response(self, x: int, y: int) -> tuple[int, int]:
        if self.family == BOTH_CONST:
            return self.alpha, self.beta
        if self.family == A_BEFORE_B:
            return self.alpha, self.beta_x[x]
        if self.family == B_BEFORE_A:
            return self.alpha_y[y], self.beta
        raise ValueError(f"unknown family {self.family!r}")

    def behavior(self, s: Scenario) -> Behavior:
        (A, B), (X, Y) = s.outputs, s.inputs
        if self.beta_x is not None and len(self.beta_x) != X:
            raise ScenarioMismatch("beta_x length does not match Alice's input count")
        if self.alpha_y is not None and len(self.alpha_y) != Y:
            raise ScenarioMismatch("alpha_y length does not match Bob's input count")
        for x in range(X):
            for y in range(Y):
                a, b = self.response(x, y)
                if not (0 <= a < A and 0 <= b < B):
                    raise ScenarioMismatch(f"vertex outputs ({a},{b}) outside scenario {s}")
        return Behavior.deterministic(s, lambda xs: self.response(*xs))

    def to_dict(self) -> dict:
        out: dict = {"family": self.family}
        if self.family == BOTH_CONST:
            out.update(alpha=self.alpha, beta=self.beta)
        elif self.family == A_BEFORE_B:
            out.update(alpha=self.alpha, beta_x=list(self.beta_x))
        else:
            out.update(alpha_y=list(self.alpha_y), beta=self.beta)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ClassicalVertex":
        fam = data["family"]
        if fam == BOTH_CONST:
            return cls(fam, alpha=int(data["alpha"]), beta=int(data["beta"]))
        if fam == A_BEFORE_B:
            return cls(fam, alpha=int(data["alpha"]), beta_x=tuple(int(v) for v in data["beta_x"]))
        if fam == B_BEFORE_A:
            return cls(fam, alpha_y=tuple(int(v) for v in data["alpha_y"]), beta=int(data["beta"]))
        raise ValueError(f"unknown family {fam!r}")


@dataclass(frozen=True)
class PeelStep:
    entry: tuple[int, int, int, int]  # (a*, b*, x*, y*)
    epsilon: Fraction
    case: str
    vertex: ClassicalVertex
    zeros_before: int
    zeros_after: int

    def to_dict(self) -> dict:
        a, b, x, y = self.entry
        return {
            "entry": {"a": a, "b": b, "x": x, "y": y},
            "epsilon": str(self.epsilon),
            "case": self.case,
            "vertex": self.vertex.to_dict(),
            "zeros_before": self.zeros_before,
            "zeros_after": self.zeros_after,
        }


@dataclass(frozen=True)
class ConvexDecomposition:
    terms: tuple[tuple[Fraction, ClassicalVertex], ...]
    scenario: Scenario
    trace: tuple[PeelStep, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.terms)

    def to_dict(self, include_trace: bool = True) -> dict:
        out: dict = {"terms": [{"w": str(w), "vertex": v.to_dict()} for w, v in self.terms]}
        if include_trace:
            out["trace"] = [step.to_dict() for step in self.trace]
        return out

    def to_json(self, include_trace: bool = True) -> str:
        return json.dumps(self.to_dict(include_trace), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict, scenario: Scenario) -> "ConvexDecomposition":
        terms = tuple((to_fraction(t["w"]), ClassicalVertex.from_dict(t["vertex"])) for t in data["terms"])
        return cls(terms, scenario)


def _check_preconditions(b: Behavior) -> None:
    if b.scenario.party_count != 2:
        raise WrongPartyCount("decomposition is defined for two parties")
    nbts = check_nbts(b, TimingRegime.indefinite())
    if not nbts.holds:
        v = nbts.violations[0]
        raise PreconditionFailed("nbts", f"party {v.party} marginal differs at inputs {v.inputs}")
    cls = check_classicality_equalities(b)
    if not cls.holds:
        v = cls.violations[0]
        raise PreconditionFailed("classicality", f"equality fails for outputs {v.outputs} at inputs {v.inputs}")


def _select_vertex(p: Behavior, a0: int, b0: int, x0: int, y0: int, eps: Fraction):
    (A, B), (X, Y) = p.scenario.outputs, p.scenario.inputs
    x_zero = [x for x in range(X) if x != x0 and p(a0, b0, x, y0) == 0]
    y_zero = [y for y in range(Y) if y != y0 and p(a0, b0, x0, y) == 0]
    if x_zero and y_zero:
        raise InternalContradiction(
            f"case (iv) at entry {(a0, b0, x0, y0)}: zeros at x={x_zero} and y={y_zero}"
        )
    if not x_zero and not y_zero:
        return "i", ClassicalVertex(BOTH_CONST, alpha=a0, beta=b0)
    if not x_zero:
        # case (ii): Bob fixed at b*, Alice's output follows y
        alpha_y = []
        for y in range(Y):
            if y == y0:
                alpha_y.append(a0)
                continue
            a_y = next((a for a in range(A) if all(p(a, b0, x, y) >= eps for x in range(X))), None)
            if a_y is None:
                raise InternalContradiction(f"no valid a_y for y={y} at entry {(a0, b0, x0, y0)}")
            alpha_y.append(a_y)
        return "ii", ClassicalVertex(B_BEFORE_A, alpha_y=tuple(alpha_y), beta=b0)
    beta_x = []
    for x in range(X):
        if x == x0:
            beta_x.append(b0)
            continue
        b_x = next((bb for bb in range(B) if all(p(a0, bb, x, y) >= eps for y in range(Y))), None)
        if b_x is None:
            raise InternalContradiction(f"no valid b_x for x={x} at entry {(a0, b0, x0, y0)}")
        beta_x.append(b_x)
    return "iii", ClassicalVertex(A_BEFORE_B, alpha=a0, beta_x=tuple(beta_x))


def decompose(b: Behavior) -> ConvexDecomposition:
    """Write a classical behavior as an explicit mixture of classical vertices.

    Raises :class:`PreconditionFailed` if ``b`` violates indefinite-timing
    NBTS or the four-term classicality equalities.  Ties for the smallest
    entry go to the lexicographically smallest (x*, y*, a*, b*).
    """
    _check_preconditions(b)
    s = b.scenario
    idx = s.index
    limit = s.dim
    p = b
    mass = Fraction(1)
    terms: list[tuple[Fraction, ClassicalVertex]] = []
    trace: list[PeelStep] = []
    while True:
        if len(terms) >= limit:
            raise InternalContradiction(f"no termination after {limit} peel steps")
        eps = min(v for v in p.values if v != 0)
        k = p.values.index(eps)
        (a0, b0), (x0, y0) = idx.unflat(k)
        case, vertex = _select_vertex(p, a0, b0, x0, y0, eps)
        vb = vertex.behavior(s)
        before = p.zero_count()
        if eps == 1:
            if vb != p:
                raise InternalContradiction("final remainder is not the selected vertex")
            terms.append((mass, vertex))
            trace.append(PeelStep((a0, b0, x0, y0), eps, case, vertex, before, s.dim - s.n_input_tuples))
            break
        rest = [(pv - eps * cv) / (1 - eps) for pv, cv in zip(p.values, vb.values)]
        if any(v < 0 for v in rest):
            raise InternalContradiction(f"peeling vertex {vertex.to_dict()} left a negative entry")
        p = Behavior(s, tuple(rest))
        after = p.zero_count()
        if after <= before:
            raise InternalContradiction("peel step did not create a new zero")
        terms.append((mass * eps, vertex))
        trace.append(PeelStep((a0, b0, x0, y0), eps, case, vertex, before, after))
        mass *= 1 - eps
    return ConvexDecomposition(tuple(terms), s, tuple(trace))


def recompose(d: ConvexDecomposition, s: Scenario | None = None) -> Behavior:
    """Exact weighted sum of the vertex tables."""
    s = d.scenario if s is None else s
    if s.party_count != 2:
        raise ScenarioMismatch("classical vertices are bipartite")
    values = [Fraction(0)] * s.dim
    for w, v in d.terms:
        vb = v.behavior(s)
        values = [acc + w * pv for acc, pv in zip(values, vb.values)]
    return Behavior(s, tuple(values))


def remainders(b: Behavior, d: ConvexDecomposition) -> list[Behavior]:
    """Normalised remainders after each peel step, recomputed from the terms."""
    s = b.scenario
    out = []
    values = list(b.values)
    mass = Fraction(1)
    for w, v in d.terms[:-1]:
        vb = v.behavior(s)
        values = [pv - w * cv for pv, cv in zip(values, vb.values)]
        mass -= w
        out.append(Behavior(s, tuple(pv / mass for pv in values)))
    return out


def term_weights(d: ConvexDecomposition) -> Sequence[Fraction]:
    return [w for w, _ in d.terms]
