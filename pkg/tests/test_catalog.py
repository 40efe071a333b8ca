from fractions import Fraction

import pytest

from nbts.catalog import (
    BINARY,
    FAMILIES,
    PUBLISHED_FAMILIES,
    catalog_for,
    generate,
    generate_vertices,
    is_gyni_vertex,
)
from nbts.constraints import build_polytope
from nbts.errors import NotDeterministic, UnsupportedScenario
from nbts.polytope import enumerate_vertices, is_vertex
from nbts.scenario import Behavior, Scenario, TimingRegime, check_nbts

import oracles

HALF = Fraction(1, 2)


def test_family_sizes():
    sizes = {"det-indef": 16, "pr-like": 8, "classical-indef": 12, "det-par": 4, "lincorr-par": 6,
             "det-seq": 8, "lincorr-seq": 4, "split-seq": 8}
    for name, n in sizes.items():
        assert len(generate(name)) == n, name


def test_pr_like_formula():
    for v in generate_vertices("pr-like"):
        g, d, e = v.params["gamma"], v.params["delta"], v.params["epsilon"]
        expect = oracles.table(lambda a, b, x, y: HALF if a ^ b == ((x ^ g) & (y ^ d)) ^ e else 0)
        assert list(v.behavior.values) == expect


def test_det_indef_formula():
    for v in generate_vertices("det-indef"):
        al, be, mu, nu = (v.params[k] for k in ("alpha", "beta", "mu", "nu"))
        expect = oracles.table(lambda a, b, x, y: int(a == (mu * y) ^ al and b == (nu * x) ^ be))
        assert list(v.behavior.values) == expect


def test_lincorr_par_formula_excludes_trivial():
    for v in generate_vertices("lincorr-par"):
        assert (v.params["alpha"], v.params["beta"]) != (0, 0)


@pytest.mark.parametrize("key", sorted(PUBLISHED_FAMILIES))
def test_published_catalog_vertices_are_vertices(key):
    tag, classical = key
    regime = {"indefinite": TimingRegime.indefinite(), "parallel": TimingRegime.parallel(),
              "sequential": TimingRegime.sequential()}[tag]
    h = build_polytope(BINARY, regime, classical)
    for b in catalog_for(regime, classical):
        assert is_vertex(h, b.values)
        assert check_nbts(b, regime).holds


def test_split_seq_completes_sequential_catalog():
    r = TimingRegime.sequential()
    enumerated = set(enumerate_vertices(build_polytope(BINARY, r)).vertices)
    published = {b.values for b in catalog_for(r, False)}
    complete = {b.values for b in catalog_for(r, False, complete=True)}
    assert published < enumerated
    assert len(enumerated - published) == 8
    assert complete == enumerated


def test_sequential_b_first_is_party_swap():
    r = TimingRegime.sequential((1, 0))
    enumerated = set(enumerate_vertices(build_polytope(BINARY, r, classical=True)).vertices)
    assert {b.values for b in catalog_for(r, True)} == enumerated


def test_classical_general_counts():
    for d, m in ((2, 2), (3, 2), (2, 3)):
        s = Scenario.bipartite(d, d, m, m)
        verts = generate("classical-general", s)
        # d^2 constant, plus d·(d^m − d) for each order
        assert len(verts) == d * d + 2 * d * (d ** m - d)
        assert len(set(verts)) == len(verts)


def test_classical_general_matches_enumeration_3322():
    s = Scenario.bipartite(3, 3, 2, 2)
    h = build_polytope(s, TimingRegime.indefinite(), classical=True)
    assert set(enumerate_vertices(h).vertices) == {b.values for b in generate("classical-general", s)}


def test_unsupported_scenarios():
    with pytest.raises(UnsupportedScenario):
        generate("pr-like", Scenario.bipartite(3, 3, 2, 2))
    with pytest.raises(UnsupportedScenario):
        generate("classical-general", Scenario.bipartite(2, 3, 2, 2))
    with pytest.raises(UnsupportedScenario):
        generate("nope")
    assert set(FAMILIES) >= {"det-indef", "pr-like", "classical-general"}


def test_gyni_predicate():
    gyni = Behavior.deterministic(BINARY, lambda x: (x[1], x[0]))
    assert is_gyni_vertex(gyni)
    flipped = Behavior.deterministic(BINARY, lambda x: (x[1] ^ 1, x[0]))
    assert is_gyni_vertex(flipped)
    assert not is_gyni_vertex(Behavior.deterministic(BINARY, lambda x: (0, x[0])))
    with pytest.raises(NotDeterministic):
        is_gyni_vertex(Behavior.uniform(BINARY))
    with pytest.raises(UnsupportedScenario):
        is_gyni_vertex(Behavior.uniform(Scenario.bipartite(3, 2, 2, 2)))
    gynis = [b for b in generate("det-indef") if is_gyni_vertex(b)]
    assert len(gynis) == 4
