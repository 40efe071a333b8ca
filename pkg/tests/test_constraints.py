import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbts.constraints import (
    HPolytope,
    LinearConstraint,
    affine_rank,
    build_polytope,
    classicality_constraints,
    count_independent_classicality,
    nbts_constraints,
    normalization_constraints,
    positivity_constraints,
)
from nbts.errors import DimensionMismatch, WrongPartyCount
from nbts.linalg import independent_rows, nullspace, primitive_integer, rank, rref, solve_affine, solve_unique
from nbts.scenario import Scenario, TimingRegime

import oracles

BIN = Scenario.bipartite(2, 2, 2, 2)


def test_normalization_counts():
    assert len(normalization_constraints(BIN)) == 4
    assert len(normalization_constraints(Scenario((2,), (3,)))) == 3
    assert len(normalization_constraints(Scenario.bipartite(3, 3, 3, 3))) == 9


def test_linear_constraint_canonical():
    c = LinearConstraint({3: 1, 1: Fraction(1, 2), 2: 0}, 1)
    assert c.coeffs == ((1, Fraction(1, 2)), (3, Fraction(1)))
    assert LinearConstraint.from_dict(json.loads(json.dumps(c.to_dict())), "eq") == c
    assert LinearConstraint.build({0: 1, 1: 0}, 0) is not None
    assert LinearConstraint.build({0: 0}, 0) is None
    with pytest.raises(ValueError):
        LinearConstraint({0: 0}, 0)


def test_hpolytope_dimension_check_and_json():
    with pytest.raises(DimensionMismatch):
        HPolytope(3, (LinearConstraint({5: 1}, 0),))
    h = build_polytope(BIN, TimingRegime.parallel(), classical=True)
    h2 = HPolytope.from_json(h.to_json())
    assert h2 == h


@pytest.mark.parametrize("regime", ["indefinite", "parallel", "seq:AB", "seq:BA"])
@pytest.mark.parametrize("classical", [False, True])
def test_affine_span_matches_oracle(regime, classical):
    r = TimingRegime.parse(regime)
    eqs = normalization_constraints(BIN) + nbts_constraints(BIN, r)
    if classical:
        eqs = build_polytope(BIN, r, classical=True).equalities
    assert 16 - affine_rank(eqs, 16) == oracles.affine_dim(regime, classical)


@pytest.mark.parametrize("regime", ["indefinite", "parallel", "seq:AB"])
def test_nbts_rows_lie_in_oracle_row_space(regime):
    E, _, _, _ = oracles.equality_system(regime, False)
    ours = np.array([[float(v) for v in c.dense(16)] for c in nbts_constraints(BIN, TimingRegime.parse(regime))])
    r0 = np.linalg.matrix_rank(E)
    assert np.linalg.matrix_rank(np.vstack([E, ours])) == r0


def test_nbts_constraints_hold_on_nbts_vertices():
    from nbts.catalog import generate
    for b in generate("det-indef") + generate("pr-like"):
        assert all(c.satisfied(b.values) for c in nbts_constraints(BIN, TimingRegime.indefinite()))


def test_classicality_constraint_count_and_support():
    cs = classicality_constraints(BIN)
    assert len(cs) == 4
    assert all(len(c.coeffs) == 4 for c in cs)
    with pytest.raises(WrongPartyCount):
        classicality_constraints(Scenario((2,), (2,)))
    with pytest.raises(WrongPartyCount):
        build_polytope(Scenario((2, 2, 2), (2, 2, 2)), TimingRegime.indefinite(), classical=True)


def test_count_independent_examples():
    assert count_independent_classicality(BIN) == 1
    assert count_independent_classicality(Scenario.bipartite(3, 2, 2, 2)) == 2
    assert count_independent_classicality(Scenario.bipartite(2, 2, 1, 2)) == 0


def test_positivity():
    ps = positivity_constraints(BIN)
    assert len(ps) == 16 and all(c.relation == "geq" for c in ps)


def test_n_party_constraints_generate():
    s = Scenario((2, 2, 2), (2, 2, 2))
    for r in (TimingRegime.indefinite(), TimingRegime.parallel(), TimingRegime.sequential((0, 1, 2))):
        h = build_polytope(s, r)
        assert h.ambient_dim == 64 and len(h.equalities) > 8


# exact linear algebra -------------------------------------------------------


def test_rref_and_rank():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    red, piv = rref(rows, 3)
    assert piv == [0, 1] and rank(rows, 3) == 2
    ns = nullspace(rows, 3)
    assert len(ns) == 1
    assert all(sum(Fraction(a) * b for a, b in zip(r, ns[0])) == 0 for r in rows)


def test_solvers():
    rows = [[1, 1], [1, -1]]
    assert solve_unique(rows, [2, 0], 2) == [1, 1]
    assert solve_unique([[1, 1]], [1], 2) is None
    assert solve_affine([[1, 1], [2, 2]], [1, 3], 2) is None
    z = solve_affine([[1, 1]], [1], 2)
    assert z[0] + z[1] == 1


def test_primitive_integer():
    assert primitive_integer([Fraction(1, 2), Fraction(-3, 4), 0]) == [2, -3, 0]


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=6))
def test_rank_agrees_with_numpy(rows):
    assert rank(rows, 4) == np.linalg.matrix_rank(np.array(rows, dtype=float))
    keep = independent_rows(rows, 4)
    assert len(keep) == rank(rows, 4)
    assert rank([rows[i] for i in keep], 4) == len(keep)
