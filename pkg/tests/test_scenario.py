import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbts.catalog import BINARY, generate
from nbts.errors import IndexOutOfRange, InvalidBehavior, ScenarioMismatch, WeightError, WrongPartyCount
from nbts.scenario import (
    Behavior,
    Scenario,
    TimingRegime,
    check_classicality_equalities,
    check_nbts,
    marginal,
    mix,
    swap_parties,
    to_fraction,
)

import oracles

HALF = Fraction(1, 2)


def pr_box(gamma=0, delta=0, eps=0):
    return Behavior(BINARY, oracles.table(
        lambda a, b, x, y: HALF if a ^ b == ((x ^ gamma) & (y ^ delta)) ^ eps else 0))


def det(fa, fb, s=BINARY):
    return Behavior.deterministic(s, lambda x: (fa(*x), fb(*x)))


# parsing --------------------------------------------------------------------


def test_to_fraction_rejects_floats_and_decimals():
    assert to_fraction("3/6") == Fraction(1, 2)
    assert to_fraction(2) == 2
    for bad in (0.5, "0.5", "1e-3", True, None, "x"):
        with pytest.raises(InvalidBehavior):
            to_fraction(bad)


def test_scenario_parse_and_counts():
    s = Scenario.parse("3,2,2,4")
    assert s.outputs == (3, 2) and s.inputs == (2, 4)
    assert s.dim == 48 and str(s) == "3,2,2,4"
    with pytest.raises(ValueError):
        Scenario.parse("2,2,2")
    with pytest.raises(ValueError):
        Scenario((2, 0), (1, 1))


def test_behavior_invariants():
    with pytest.raises(InvalidBehavior):
        Behavior(BINARY, (Fraction(1, 2),) * 16)  # sums to 2
    with pytest.raises(InvalidBehavior):
        Behavior(BINARY, (1, 0, 0, 0) * 3)
    vals = [1, 0, 0, 0] * 4
    vals[0], vals[1] = 2, -1
    with pytest.raises(InvalidBehavior):
        Behavior(BINARY, tuple(vals))


def test_flat_order_matches_independent_indexing():
    fn = lambda a, b, x, y: Fraction(1 + a + 2 * b + 3 * x * y, 10 + 4 * 3 * x * y)
    b = Behavior.from_function(BINARY, lambda a, x: fn(a[0], a[1], x[0], x[1]))
    assert list(b.values) == oracles.table(fn)
    assert b(1, 0, 1, 1) == fn(1, 0, 1, 1)
    with pytest.raises(IndexOutOfRange):
        b(0, 0, 0)


def test_json_round_trip_and_format():
    b = pr_box()
    data = json.loads(b.to_json())
    assert data["scenario"] == {"outputs": [2, 2], "inputs": [2, 2]}
    assert data["p"][0][0] == [["1/2", "0"], ["0", "1/2"]]
    assert data["p"][1][1] == [["0", "1/2"], ["1/2", "0"]]
    assert Behavior.from_json(b.to_json()) == b
    data["p"][0][0][0][0] = 1  # integer shorthand
    data["p"][0][0][1][1] = 0
    assert Behavior.from_dict(data)(0, 0, 0, 0) == 1
    data["p"][0][0][0][0] = 0.5
    with pytest.raises(InvalidBehavior):
        Behavior.from_dict(data)


# marginals ------------------------------------------------------------------


def test_marginal_uniform_and_pr():
    for b in (Behavior.uniform(BINARY), pr_box()):
        m = marginal(b, 0)
        assert all(v == HALF for v in m.values())
        assert len(m) == 8


def test_marginal_of_deterministic_vertex():
    b = det(lambda x, y: y, lambda x, y: 0)  # α=0, μ=1, β=ν=0
    m = marginal(b, 0)
    for x in (0, 1):
        assert m[(0, (x, 0))] == 1 and m[(1, (x, 1))] == 1


def test_marginal_bad_party():
    with pytest.raises(IndexOutOfRange):
        marginal(pr_box(), 2)


# nbts checks ----------------------------------------------------------------


def test_check_nbts_examples():
    assert check_nbts(pr_box(), TimingRegime.indefinite()).holds
    copy_own = det(lambda x, y: x, lambda x, y: 0)
    rep = check_nbts(copy_own, TimingRegime.indefinite())
    assert not rep.holds and {v.party for v in rep.violations} == {0}
    gyni = det(lambda x, y: y, lambda x, y: x)
    assert check_nbts(gyni, TimingRegime.indefinite()).holds
    assert not check_nbts(gyni, TimingRegime.parallel()).holds


def test_check_nbts_sequential():
    # Bob reads Alice's input: allowed in A→B, forbidden in B→A
    b = det(lambda x, y: 0, lambda x, y: x)
    assert check_nbts(b, TimingRegime.sequential((0, 1))).holds
    assert not check_nbts(b, TimingRegime.sequential((1, 0))).holds
    assert TimingRegime.parse("seq:BA") == TimingRegime.sequential((1, 0))
    assert str(TimingRegime.parse("seq:AB")) == "seq:AB"


def test_check_nbts_reports_every_violation_exactly():
    b = det(lambda x, y: x, lambda x, y: y)
    rep = check_nbts(b, TimingRegime.indefinite())
    # each party: 2 outputs × 2 inputs of the other party with own input 1
    assert len(rep.violations) == 8
    for v in rep.violations:
        assert v.lhs != v.rhs


def test_three_party_sequential():
    s = Scenario((2, 2, 2), (2, 2, 2))
    # C copies A's input: allowed when A precedes C
    b = Behavior.deterministic(s, lambda x: (0, 0, x[0]))
    assert check_nbts(b, TimingRegime.sequential((0, 1, 2))).holds
    assert not check_nbts(b, TimingRegime.sequential((2, 1, 0))).holds
    assert check_nbts(b, TimingRegime.indefinite()).holds


def test_degenerate_scenario_holds_vacuously():
    s = Scenario.bipartite(1, 1, 2, 3)
    b = Behavior.uniform(s)
    for r in (TimingRegime.indefinite(), TimingRegime.parallel(), TimingRegime.sequential()):
        assert check_nbts(b, r).holds
    assert check_classicality_equalities(b).holds


# classicality --------------------------------------------------------------


def test_classicality_examples():
    prod = Behavior.from_function(Scenario.bipartite(2, 3, 2, 2),
                                  lambda a, x: Fraction(1 + a[0], 3) * Fraction(1, 3))
    assert check_classicality_equalities(prod).holds
    rep = check_classicality_equalities(pr_box())
    assert not rep.holds
    assert any(v.outputs == (0, 0) and v.lhs == HALF and v.rhs == 1 for v in rep.violations)
    ab = det(lambda x, y: 0, lambda x, y: x)
    ba = det(lambda x, y: y, lambda x, y: 1)
    assert check_classicality_equalities(mix([ab, ba], [Fraction(1, 3), Fraction(2, 3)])).holds
    with pytest.raises(WrongPartyCount):
        check_classicality_equalities(Behavior.uniform(Scenario((2,), (2,))))


# mixing ---------------------------------------------------------------------


def test_mix_examples():
    v = pr_box()
    assert mix([v], [1]) == v
    m = mix([det(lambda x, y: 0, lambda x, y: 0), det(lambda x, y: 1, lambda x, y: x)], [HALF, HALF])
    assert set(m.values) <= {0, HALF, 1}
    assert mix(generate("pr-like"), [Fraction(1, 8)] * 8) == Behavior.uniform(BINARY)


def test_mix_errors():
    v = pr_box()
    with pytest.raises(WeightError):
        mix([v, v], [HALF, Fraction(1, 3)])
    with pytest.raises(WeightError):
        mix([v, v], [Fraction(3, 2), -HALF])
    with pytest.raises(ScenarioMismatch):
        mix([v, Behavior.uniform(Scenario.bipartite(2, 2, 2, 3))], [HALF, HALF])


def test_swap_parties():
    b = det(lambda x, y: 0, lambda x, y: x)
    s = swap_parties(b)
    assert s(1, 0, 0, 1) == 1  # Alice now copies Bob's input
    assert swap_parties(s) == b


# properties -----------------------------------------------------------------

CLASSICAL = generate("classical-indef")
ALL_NBTS = generate("det-indef") + generate("pr-like")


@st.composite
def weights(draw, n):
    raw = draw(st.lists(st.integers(0, 20), min_size=n, max_size=n).filter(lambda w: sum(w) > 0))
    return [Fraction(w, sum(raw)) for w in raw]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_marginals_sum_to_one(data):
    w = data.draw(weights(len(ALL_NBTS)))
    b = mix(ALL_NBTS, w)
    for party in (0, 1):
        m = marginal(b, party)
        for x in BINARY.input_tuples():
            assert sum(m[(a, x)] for a in range(2)) == 1
    pa, pb = oracles.marginals(b.values, 2, 2, 2, 2)
    assert all(marginal(b, 0)[(a, (x, y))] == v for (a, x, y), v in pa.items())
    assert all(marginal(b, 1)[(bb, (x, y))] == v for (bb, x, y), v in pb.items())


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_mix_linearity(data):
    idx = data.draw(st.lists(st.integers(0, len(ALL_NBTS) - 1), min_size=2, max_size=5))
    w = data.draw(weights(len(idx)))
    comps = [ALL_NBTS[i] for i in idx]
    m = mix(comps, w)
    for k in range(16):
        assert m.values[k] == sum(wi * c.values[k] for wi, c in zip(w, comps))
    if all(check_classicality_equalities(c).holds for c in comps):
        assert check_classicality_equalities(m).holds
    assert check_nbts(m, TimingRegime.indefinite()).holds


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_single_equality_propagates(data):
    """In the binary scenario NBTS plus one four-term equality imply all of them."""
    w = data.draw(weights(len(ALL_NBTS)))
    b = mix(ALL_NBTS, w)
    single = b(0, 0, 0, 0) + b(0, 0, 1, 1) == b(0, 0, 0, 1) + b(0, 0, 1, 0)
    assert check_classicality_equalities(b).holds == single


def test_single_equality_propagates_on_solution_set():
    # the PR boxes with ε=0 and ε=1 cancel in the single equality
    b = mix([pr_box(0, 0, 0), pr_box(0, 0, 1)], [HALF, HALF])
    assert check_classicality_equalities(b).holds
    b = mix([pr_box(0, 0, 0), CLASSICAL[3]], [HALF, HALF])
    assert not check_classicality_equalities(b).holds
