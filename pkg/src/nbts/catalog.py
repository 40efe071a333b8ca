"""Closed-form vertex families of the NBTS and classical polytopes.

Binary families live on the (2,2,2,2) scenario and are indexed by bits
α, β, γ, δ, ε, μ, ν.  The ``classical-general`` family covers any (d,d,m,m)
scenario and is the union of the both-constant, A-before-B and B-before-A
deterministic strategies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import NotDeterministic, UnsupportedScenario
from .scenario import Behavior, Scenario, TimingRegime, swap_parties

HALF = Fraction(1, 2)
BINARY = Scenario.bipartite(2, 2, 2, 2)


@dataclass(frozen=True)
class Vertex:
    """A catalog behavior together with the family parameters that produced it."""

    family: str
    params: dict = field(hash=False, compare=False)
    behavior: Behavior

    def descriptor(self) -> dict:
        return {"family": self.family, **self.params}


def _bits(n: int):
    return itertools.product((0, 1), repeat=n)


def _binary(fn: Callable[[int, int, int, int], object]) -> Behavior:
    return Behavior.from_function(BINARY, lambda a, x: fn(a[0], a[1], x[0], x[1]))


def _det_indef(exclude_both: bool):
    out = []
    for alpha, beta, mu, nu in _bits(4):
        if exclude_both and mu == nu == 1:
            continue
        b = _binary(lambda a, bb, x, y: int(a == (mu * y) ^ alpha and bb == (nu * x) ^ beta))
        out.append(Vertex("det_indef", {"alpha": alpha, "beta": beta, "mu": mu, "nu": nu}, b))
    return out


def pr_like() -> list[Vertex]:
    out = []
    for gamma, delta, eps in _bits(3):
        b = _binary(lambda a, bb, x, y: HALF if a ^ bb == ((x ^ gamma) & (y ^ delta)) ^ eps else 0)
        out.append(Vertex("pr_like", {"gamma": gamma, "delta": delta, "epsilon": eps}, b))
    return out


def det_par() -> list[Vertex]:
    return [
        Vertex("det_par", {"alpha": al, "beta": be},
               _binary(lambda a, bb, x, y: int(a == al and bb == be)))
        for al, be in _bits(2)
    ]


def lincorr_par() -> list[Vertex]:
    out = []
    for al, be, de in _bits(3):
        if al == be == 0:
            continue
        b = _binary(lambda a, bb, x, y: HALF if a ^ bb == (al * x) ^ (be * y) ^ de else 0)
        out.append(Vertex("lincorr_par", {"alpha": al, "beta": be, "delta": de}, b))
    return out


def det_seq() -> list[Vertex]:
    return [
        Vertex("det_seq", {"alpha": al, "beta": be, "gamma": ga},
               _binary(lambda a, bb, x, y: int(a == al and bb == (be * x) ^ ga)))
        for al, be, ga in _bits(3)
    ]


def lincorr_seq() -> list[Vertex]:
    return [
        Vertex("lincorr_seq", {"alpha": al, "beta": be},
               _binary(lambda a, bb, x, y: HALF if a ^ bb == y ^ (al * x) ^ be else 0))
        for al, be in _bits(2)
    ]


def split_seq() -> list[Vertex]:
    """Sequential-regime vertices absent from the published list.

    For one value x* of Alice's input Bob outputs a fixed bit β and Alice's
    bit is uniform; for the other input a⊕b = y⊕δ.  Each is a basic feasible
    solution of the A→B NBTS system.
    """
    out = []
    for xs, be, de in _bits(3):
        def fn(a, bb, x, y, xs=xs, be=be, de=de):
            if x == xs:
                return HALF if bb == be else 0
            return HALF if a ^ bb == y ^ de else 0
        out.append(Vertex("split_seq", {"x_star": xs, "beta": be, "delta": de}, _binary(fn)))
    return out


# classical families for (d,d,m,m) ------------------------------------------


def _require_square(s: Scenario) -> tuple[int, int]:
    if s.party_count != 2:
        raise UnsupportedScenario("classical families need two parties")
    (A, B), (X, Y) = s.outputs, s.inputs
    if A != B or X != Y:
        raise UnsupportedScenario(f"classical families need a (d,d,m,m) scenario, got {s}")
    return A, X


def both_const(s: Scenario) -> list[Vertex]:
    d, _ = _require_square(s)
    return [
        Vertex("both_const", {"alpha": al, "beta": be},
               Behavior.deterministic(s, lambda x, al=al, be=be: (al, be)))
        for al in range(d) for be in range(d)
    ]


def a_before_b(s: Scenario) -> list[Vertex]:
    d, m = _require_square(s)
    return [
        Vertex("A_before_B", {"alpha": al, "beta_x": list(bx)},
               Behavior.deterministic(s, lambda x, al=al, bx=bx: (al, bx[x[0]])))
        for al in range(d) for bx in itertools.product(range(d), repeat=m)
    ]


def b_before_a(s: Scenario) -> list[Vertex]:
    d, m = _require_square(s)
    return [
        Vertex("B_before_A", {"alpha_y": list(ay), "beta": be},
               Behavior.deterministic(s, lambda x, ay=ay, be=be: (ay[x[1]], be)))
        for ay in itertools.product(range(d), repeat=m) for be in range(d)
    ]


def classical_general(s: Scenario) -> list[Vertex]:
    """Union of the three deterministic classical families, first occurrence kept."""
    return _dedupe(both_const(s) + a_before_b(s) + b_before_a(s))


def _dedupe(vertices: list[Vertex]) -> list[Vertex]:
    seen, out = set(), []
    for v in vertices:
        if v.behavior not in seen:
            seen.add(v.behavior)
            out.append(v)
    return out


def _binary_only(fn):
    def gen(s: Scenario):
        if s != BINARY:
            raise UnsupportedScenario(f"family is defined on (2,2,2,2) only, got {s}")
        return fn()
    return gen


FAMILIES: dict[str, Callable[[Scenario], list[Vertex]]] = {
    "det-indef": _binary_only(lambda: _det_indef(False)),
    "pr-like": _binary_only(pr_like),
    "classical-indef": _binary_only(lambda: _det_indef(True)),
    "det-par": _binary_only(det_par),
    "lincorr-par": _binary_only(lincorr_par),
    "det-seq": _binary_only(det_seq),
    "lincorr-seq": _binary_only(lincorr_seq),
    "split-seq": _binary_only(split_seq),
    "classical-general": classical_general,
    "both-const": both_const,
    "A-before-B": a_before_b,
    "B-before-A": b_before_a,
}


def generate(family: str, s: Scenario = BINARY) -> list[Behavior]:
    """Complete, deduplicated family as exact behaviors."""
    return [v.behavior for v in generate_vertices(family, s)]


def generate_vertices(family: str, s: Scenario = BINARY) -> list[Vertex]:
    try:
        gen = FAMILIES[family]
    except KeyError:
        raise UnsupportedScenario(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    return _dedupe(gen(s))


# Families making up each (2,2,2,2) polytope, as published.
PUBLISHED_FAMILIES = {
    ("indefinite", False): ("det-indef", "pr-like"),
    ("indefinite", True): ("classical-indef",),
    ("parallel", False): ("det-par", "pr-like", "lincorr-par"),
    ("parallel", True): ("det-par",),
    ("sequential", False): ("det-seq", "pr-like", "lincorr-seq"),
    ("sequential", True): ("det-seq",),
}


def catalog_for(regime: TimingRegime, classical: bool, complete: bool = False) -> list[Behavior]:
    """Vertex set of a (2,2,2,2) polytope from closed-form families.

    ``complete=True`` adds the ``split-seq`` family to the sequential NBTS
    polytope.  Sequential orders B→A are obtained by exchanging the parties.
    """
    names = PUBLISHED_FAMILIES[(regime.tag, classical)]
    if complete and regime.tag == "sequential" and not classical:
        names = names + ("split-seq",)
    out = []
    for name in names:
        out.extend(generate(name))
    if regime.tag == "sequential" and regime.order == (1, 0):
        out = [swap_parties(b) for b in out]
    seen, uniq = set(), []
    for b in out:
        if b not in seen:
            seen.add(b)
            uniq.append(b)
    return uniq


def is_gyni_vertex(b: Behavior) -> bool:
    """True iff b is deterministic with a = y⊕α and b = x⊕β."""
    if b.scenario != BINARY:
        raise UnsupportedScenario("GYNI vertices live in the (2,2,2,2) scenario")
    if not b.is_deterministic():
        raise NotDeterministic("behavior is not deterministic")
    resp = {x: b.response(x) for x in BINARY.input_tuples()}
    # Alice's output must flip with y for fixed x, Bob's must flip with x for fixed y
    a_flips = all(resp[(x, 0)][0] != resp[(x, 1)][0] for x in (0, 1))
    b_flips = all(resp[(0, y)][1] != resp[(1, y)][1] for y in (0, 1))
    a_ignores_x = all(resp[(0, y)][0] == resp[(1, y)][0] for y in (0, 1))
    b_ignores_y = all(resp[(x, 0)][1] == resp[(x, 1)][1] for x in (0, 1))
    return a_flips and b_flips and a_ignores_x and b_ignores_y
