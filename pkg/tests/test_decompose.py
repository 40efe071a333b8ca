import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbts.catalog import BINARY, generate, generate_vertices
from nbts.decompose import (
    A_BEFORE_B,
    B_BEFORE_A,
    BOTH_CONST,
    ClassicalVertex,
    ConvexDecomposition,
    decompose,
    recompose,
    remainders,
)
from nbts.errors import PreconditionFailed, ScenarioMismatch, WrongPartyCount
from nbts.scenario import (
    Behavior,
    Scenario,
    TimingRegime,
    check_classicality_equalities,
    check_nbts,
    mix,
)

import oracles

F = Fraction


def vertex_table(v: ClassicalVertex, A, B, X, Y):
    """Deterministic table from the descriptor alone."""
    return oracles.table(lambda a, b, x, y: int((a, b) == v.response(x, y)), A, B, X, Y)


def test_single_vertex_is_single_term():
    for b in generate("classical-indef"):
        d = decompose(b)
        assert len(d) == 1 and d.terms[0][0] == 1
        assert recompose(d) == b


def test_two_constant_vertices():
    v0 = ClassicalVertex(BOTH_CONST, alpha=0, beta=0).behavior(BINARY)
    v1 = ClassicalVertex(BOTH_CONST, alpha=1, beta=1).behavior(BINARY)
    d = decompose(mix([v0, v1], [F(1, 2), F(1, 2)]))
    assert sorted(w for w, _ in d.terms) == [F(1, 2), F(1, 2)]
    assert {v.family for _, v in d.terms} == {BOTH_CONST}


def test_mixed_order_example():
    ab = ClassicalVertex(A_BEFORE_B, alpha=0, beta_x=(0, 1)).behavior(BINARY)
    ba = ClassicalVertex(B_BEFORE_A, alpha_y=(1, 0), beta=1).behavior(BINARY)
    b = mix([ab, ba], [F(1, 3), F(2, 3)])
    d = decompose(b)
    assert recompose(d) == b and len(d) <= 16
    assert sum(w for w, _ in d.terms) == 1


def test_recompose_quarter_weights():
    d = ConvexDecomposition(((F(1, 4), ClassicalVertex(BOTH_CONST, alpha=0, beta=0)),
                             (F(3, 4), ClassicalVertex(A_BEFORE_B, alpha=1, beta_x=(0, 1)))), BINARY)
    assert set(recompose(d).values) <= {0, F(1, 4), F(3, 4), 1}


def test_vertex_descriptor_tables_match_oracle():
    for fam in ("both-const", "A-before-B", "B-before-A"):
        for v in generate_vertices(fam, BINARY):
            p = v.params
            cv = {"both-const": lambda: ClassicalVertex(BOTH_CONST, alpha=p["alpha"], beta=p["beta"]),
                  "A-before-B": lambda: ClassicalVertex(A_BEFORE_B, alpha=p["alpha"], beta_x=tuple(p["beta_x"])),
                  "B-before-A": lambda: ClassicalVertex(B_BEFORE_A, alpha_y=tuple(p["alpha_y"]), beta=p["beta"]),
                  }[fam]()
            assert list(cv.behavior(BINARY).values) == vertex_table(cv, 2, 2, 2, 2) == list(v.behavior.values)


def test_vertex_scenario_mismatch():
    with pytest.raises(ScenarioMismatch):
        ClassicalVertex(A_BEFORE_B, alpha=0, beta_x=(0, 1, 1)).behavior(BINARY)
    with pytest.raises(ScenarioMismatch):
        ClassicalVertex(BOTH_CONST, alpha=2, beta=0).behavior(BINARY)


def test_preconditions():
    pr = generate("pr-like")[0]
    with pytest.raises(PreconditionFailed) as exc:
        decompose(pr)
    assert exc.value.condition == "classicality"
    copy_own = Behavior.deterministic(BINARY, lambda x: (x[0], 0))
    with pytest.raises(PreconditionFailed) as exc:
        decompose(copy_own)
    assert exc.value.condition == "nbts"
    with pytest.raises(WrongPartyCount):
        decompose(Behavior.uniform(Scenario((2,), (2,))))


def test_tie_break_first_entry_and_trace():
    b = Behavior.uniform(BINARY)  # every entry 1/4: first peel at (a,b,x,y) = (0,0,0,0)
    d = decompose(b)
    first = d.trace[0]
    assert first.entry == (0, 0, 0, 0) and first.epsilon == F(1, 4)
    assert first.case == "i"
    assert recompose(d) == b


def test_json_round_trip():
    ab = ClassicalVertex(A_BEFORE_B, alpha=0, beta_x=(0, 1)).behavior(BINARY)
    ba = ClassicalVertex(B_BEFORE_A, alpha_y=(1, 0), beta=1).behavior(BINARY)
    d = decompose(mix([ab, ba], [F(1, 3), F(2, 3)]))
    data = json.loads(d.to_json())
    assert set(data) == {"terms", "trace"}
    assert all(set(t) == {"w", "vertex"} for t in data["terms"])
    back = ConvexDecomposition.from_dict(data, BINARY)
    assert recompose(back) == recompose(d)
    assert "trace" not in d.to_dict(include_trace=False)


# properties -------------------------------------------------------------------


SCENARIOS = [Scenario.bipartite(d, d, m, m) for d, m in ((2, 2), (3, 2), (2, 3))]
VERTS = {s: generate("classical-general", s) for s in SCENARIOS}


@st.composite
def classical_mixture(draw):
    s = draw(st.sampled_from(SCENARIOS))
    vs = VERTS[s]
    idx = draw(st.lists(st.integers(0, len(vs) - 1), min_size=1, max_size=6))
    w = draw(st.lists(st.integers(1, 30), min_size=len(idx), max_size=len(idx)))
    return mix([vs[i] for i in idx], [F(x, sum(w)) for x in w])


@settings(max_examples=150, deadline=None)
@given(classical_mixture())
def test_decomposition_properties(b):
    s = b.scenario
    d = decompose(b)
    (A, _), (X, _) = s.outputs, s.inputs
    assert len(d) <= A * A * X * X
    assert all(w > 0 for w, _ in d.terms) and sum(w for w, _ in d.terms) == 1
    # exact recomposition, computed independently from the descriptors
    acc = [F(0)] * s.dim
    for w, v in d.terms:
        acc = [a + w * t for a, t in zip(acc, vertex_table(v, *s.outputs, *s.inputs))]
    assert acc == list(b.values)
    for step in d.trace[:-1]:
        assert step.zeros_after > step.zeros_before
    assert d.trace[-1].epsilon == 1
    for r in remainders(b, d):
        assert check_nbts(r, TimingRegime.indefinite()).holds
        assert check_classicality_equalities(r).holds


@settings(max_examples=50, deadline=None)
@given(classical_mixture())
def test_epsilon_is_smallest_nonzero_entry(b):
    d = decompose(b)
    rems = [b] + remainders(b, d)
    for step, r in zip(d.trace, rems):
        assert step.epsilon == min(v for v in r.values if v)
