"""From two-time states to behaviors, and from floating behaviors to exact ones."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..constraints import LinearConstraint, normalization_constraints
from ..errors import InvalidBehavior, ScenarioMismatch, WrongWireSet
from ..linalg import independent_rows, solve_unique
from ..scenario import Behavior, Scenario, TimingRegime
from . import config
from .analysis import probability
from .processes import (
    NAMED_UNITARIES,
    Measurement,
    _rng,
    basis_vectors,
    channel_from_kraus,
    clock,
    discard_randomize,
    fourier,
    identity_channel,
    identity_vector,
    measure_prepare,
    projective_instrument,
    random_channel,
    random_density,
    random_instrument,
    random_kraus,
    shift,
    state,
    throw_away_replace,
    unitary_channel,
)
from .tensor import LabeledTensor, bullet

# strategies -----------------------------------------------------------------


@dataclass(frozen=True)
class Strategy:
    """One party's measurement (wire 1 → 2) and its input-indexed channels (wire 2 → 3)."""

    measurement: Measurement
    channels: tuple[LabeledTensor, ...]
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if sorted(self.measurement.outcomes) != list(range(len(self.measurement.outcomes))):
            raise ValueError("measurement outcomes must be 0..n-1")
        if not self.channels:
            raise ValueError("a strategy needs at least one channel")

    @property
    def n_outcomes(self) -> int:
        return len(self.measurement.outcomes)

    @property
    def n_settings(self) -> int:
        return len(self.channels)


def _named_unitary(name: str, d: int) -> np.ndarray:
    if name == "F":
        return fourier(d)
    if name == "shift":
        return shift(d)
    if name == "clock":
        return clock(d)
    if name in NAMED_UNITARIES:
        if d != 2:
            raise ValueError(f"unitary {name!r} is defined for qubits only")
        return NAMED_UNITARIES[name]
    raise ValueError(f"unknown unitary {name!r}")


def strategy_from_dict(data: dict, party: str, d_in: int, d_out: int) -> Strategy:
    """Build a strategy from named constructions.

    ``{"measurement": {"basis": "computational", "mode": "measure_prepare", "prepare": 0},
    "channels": ["I", "X"]}``.  Bases: computational, plus, plus_i (with
    levels ``r``, ``s``); modes: measure_prepare, projective; or
    ``{"type": "discard_randomize"}``.  Channel names: I, X, Y, Z, H, S
    (qubits), F, shift, clock, T (throw away and replace).
    """
    w1, w2, w3 = party + "1", party + "2", party + "3"
    m = data.get("measurement", {})
    if m.get("type") == "discard_randomize":
        meas = discard_randomize(w1, w2, d_in, d_out)
    else:
        basis = basis_vectors(d_in, m.get("basis", "computational"), int(m.get("r", 0)), int(m.get("s", 1)))
        mode = m.get("mode", "measure_prepare")
        if mode == "measure_prepare":
            prep = np.eye(d_out, dtype=complex)[int(m.get("prepare", 0))]
            meas = measure_prepare(basis, w1, w2, prepare=prep, out_dim=d_out)
        elif mode == "projective":
            if d_in != d_out:
                raise ValueError("projective measurements need equal input and output dimension")
            meas = projective_instrument(basis, w1, w2)
        else:
            raise ValueError(f"unknown measurement mode {mode!r}")
    names = tuple(data.get("channels", ["I"]))
    chans = []
    for name in names:
        if name == "T":
            chans.append(throw_away_replace(w2, w3, d_out))
        elif name == "I":
            chans.append(identity_channel(w2, w3, d_out))
        else:
            chans.append(unitary_channel(_named_unitary(name, d_out), w2, w3))
    return Strategy(meas, tuple(chans), names)


# extraction -----------------------------------------------------------------


@dataclass(frozen=True)
class BehaviorExtraction:
    probabilities: np.ndarray  # indexed [x][y][a][b]
    behavior: Behavior
    max_error: float
    raw: tuple[Fraction, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "float": self.probabilities.tolist(),
            "behavior": self.behavior.to_dict(),
            "max_error": self.max_error,
        }


def behavior_floats(eta: LabeledTensor, alice: Strategy, bob: Strategy, tol: float | None = None) -> np.ndarray:
    X, Y, A, B = alice.n_settings, bob.n_settings, alice.n_outcomes, bob.n_outcomes
    P = np.zeros((X, Y, A, B))
    for x, y in itertools.product(range(X), range(Y)):
        probs = probability(eta, [alice.measurement, bob.measurement], [alice.channels[x], bob.channels[y]], tol)
        for (a, b), v in probs.items():
            P[x, y, a, b] = v
    return P


def extract_behavior(eta: LabeledTensor, alice: Strategy, bob: Strategy, tol: float | None = None,
                     project_onto: Sequence[LinearConstraint] = (), max_denominator: int = 10**6
                     ) -> BehaviorExtraction:
    """p(a,b|x,y) in floating point, plus an exact behavior close to it.

    See :func:`rationalize` for the exact part; ``project_onto`` adds
    equalities the exact behavior must satisfy besides normalisation.
    """
    P = behavior_floats(eta, alice, bob, tol)
    s = Scenario.bipartite(alice.n_outcomes, bob.n_outcomes, alice.n_settings, bob.n_settings)
    beh, err, raw = rationalize(P.reshape(-1), s, project_onto, max_denominator)
    return BehaviorExtraction(P, beh, err, tuple(raw))


def rationalize(values: Sequence[float], s: Scenario, extra: Sequence[LinearConstraint] = (),
                max_denominator: int = 10**6) -> tuple[Behavior, float, list[Fraction]]:
    """Exact behavior near ``values`` (flat coordinate order).

    Each entry is first replaced by its best rational approximation with
    denominator ≤ ``max_denominator``.  Those approximants are then moved by
    the exact orthogonal projection onto the affine space cut out by
    normalisation, the ``extra`` equalities, and p_k = 0 for every entry that
    rounded to zero.  Returns the behavior, max |exact − float| and the
    unprojected approximants.
    """
    values = [float(v) for v in values]
    if len(values) != s.dim:
        raise ScenarioMismatch(f"{len(values)} values for a scenario of dimension {s.dim}")
    raw = [Fraction(v).limit_denominator(max_denominator) for v in values]
    cons = list(normalization_constraints(s)) + list(extra)
    rows = [c.dense(s.dim) for c in cons]
    rhs = [c.rhs for c in cons]
    zero_rows = [[Fraction(int(j == k)) for j in range(s.dim)] for k, q in enumerate(raw) if q <= 0]
    exact = _project(raw, rows + zero_rows, rhs + [Fraction(0)] * len(zero_rows), s.dim)
    if exact is None:
        exact = _project(raw, rows, rhs, s.dim)
    if exact is None:
        raise InvalidBehavior("the requested equalities are inconsistent")
    if any(v < 0 for v in exact):
        raise InvalidBehavior("rationalised behavior has a negative entry; the input is too far from the constraints")
    err = max(abs(float(e) - v) for e, v in zip(exact, values))
    return Behavior(s, tuple(exact)), err, raw


def _project(q: list[Fraction], rows, rhs, n: int) -> list[Fraction] | None:
    keep = independent_rows(rows, n)
    R = [rows[i] for i in keep]
    r = [rhs[i] for i in keep]
    if not R:
        return list(q)
    gram = [[sum((a * b for a, b in zip(Ri, Rj) if a and b), Fraction(0)) for Rj in R] for Ri in R]
    resid = [sum((a * b for a, b in zip(Ri, q) if a), Fraction(0)) - ri for Ri, ri in zip(R, r)]
    lam = solve_unique(gram, resid, len(R))
    out = list(q)
    for Ri, li in zip(R, lam):
        if li:
            out = [o - li * a for o, a in zip(out, Ri)]
    # the independent subset may hide an inconsistent dropped row
    for row, b in zip(rows, rhs):
        if sum((a * v for a, v in zip(row, out) if a), Fraction(0)) != b:
            return None
    return out


# floating-point condition checks -------------------------------------------


def _as_table(P, s: Scenario | None) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if s is not None:
        P = P.reshape(tuple(s.inputs) + tuple(s.outputs))
    return P


def nbts_deviation(P, regime: TimingRegime, s: Scenario | None = None) -> float:
    """Largest gap between a marginal and its value at the reference inputs.

    ``P`` is indexed [inputs...][outputs...]; for two parties [x][y][a][b].
    """
    P = _as_table(P, s)
    n = P.ndim // 2
    worst = 0.0
    for i in range(n):
        others = tuple(n + j for j in range(n) if j != i)
        M = P.sum(axis=others)  # inputs..., a_i
        ref = M
        for f in regime.forbidden_inputs(i, n):
            ref = np.take(ref, [0], axis=f)
        worst = max(worst, float(np.max(np.abs(M - ref), initial=0.0)))
    return worst


def classicality_deviation(P, s: Scenario | None = None) -> float:
    """max |p(a,b|x,y)+p(a,b|x',y')−p(a,b|x,y')−p(a,b|x',y)|."""
    P = _as_table(P, s)
    if P.ndim != 4:
        raise ScenarioMismatch("classicality equalities are defined for two parties")
    Q = P[:, None, :, None] + P[None, :, None, :] - P[:, None, None, :] - P[None, :, :, None]
    return float(np.max(np.abs(Q), initial=0.0))


def input_dependence(P, axes: Sequence[int], s: Scenario | None = None) -> float:
    """Largest change of p(a⃗|x⃗) when the input coordinates in ``axes`` vary."""
    P = _as_table(P, s)
    ref = P
    for ax in axes:
        ref = np.take(ref, [0], axis=ax)
    return float(np.max(np.abs(P - ref), initial=0.0))


# random linear two-time states ---------------------------------------------

LINEAR_KINDS = ("parallel", "A_before_B", "B_before_A", "separable")


def _ordered_state(first: str, second: str, rng, d: int, memory: int) -> LabeledTensor:
    """First party's lab, then a channel carrying its output and a memory into the second's input."""
    rho = state(random_density(d * memory, rng), [first + "1", "E"], [d, memory])
    C = channel_from_kraus(random_kraus(d * memory, d, 2, rng), [first + "3", "E"], second + "1",
                           in_dims=[d, memory], out_dims=[d])
    return bullet(rho, C, identity_vector(second + "3", d))


def random_linear_state(kind: str, rng=None, d: int = 2, memory: int = 2) -> LabeledTensor:
    """Random linear two-time state on A1, A3, B1, B3 built from an ordered circuit.

    ``parallel``: ρ^{A1B1} ⊗ 𝕀_{A3} ⊗ 𝕀_{B3}.  ``A_before_B``: Alice's
    output and a memory feed a channel into Bob's input, 𝕀_{B3}.
    ``B_before_A``: the mirror image.  ``separable``: a random convex
    mixture of the two orders.
    """
    rng = _rng(rng)
    if kind == "parallel":
        rho = state(random_density(d * d, rng), ["A1", "B1"], [d, d])
        return bullet(rho, identity_vector("A3", d), identity_vector("B3", d))
    if kind == "A_before_B":
        return _ordered_state("A", "B", rng, d, memory)
    if kind == "B_before_A":
        return _ordered_state("B", "A", rng, d, memory)
    if kind == "separable":
        q = float(rng.uniform(0.1, 0.9))
        ab = _ordered_state("A", "B", rng, d, memory)
        ba = _ordered_state("B", "A", rng, d, memory)
        return ab * q + ba * (1 - q)
    raise ValueError(f"unknown kind {kind!r}; choose from {LINEAR_KINDS}")


def random_strategy(party: str, rng=None, d: int = 2, n_outcomes: int = 2, n_settings: int = 2) -> Strategy:
    rng = _rng(rng)
    meas = random_instrument(party + "1", party + "2", d, d, n_outcomes, rng)
    chans = tuple(random_channel(party + "2", party + "3", d, d, rng) for _ in range(n_settings))
    return Strategy(meas, chans)


def check_wires(eta: LabeledTensor, wires: set[str]) -> None:
    if eta.wires != wires:
        raise WrongWireSet(f"expected wires {sorted(wires)}, got {sorted(eta.wires)}")
