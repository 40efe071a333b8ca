"""Scenarios, timing regimes and exact-rational behaviors.

A behavior is the full table p(a⃗|x⃗) of a multi-party experiment, stored as
a flat tuple of :class:`fractions.Fraction` in :class:`CoordinateIndex`
order (inputs outermost in party order, then outputs in party order).
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .errors import (
    IndexOutOfRange,
    InvalidBehavior,
    ScenarioMismatch,
    WeightError,
    WrongPartyCount,
)

PARTY_NAMES = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def to_fraction(value) -> Fraction:
    """Convert an exact value to a Fraction; floats are rejected."""
    if isinstance(value, bool):
        raise InvalidBehavior(f"boolean is not a probability: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if any(ch in text for ch in ".eE"):
            raise InvalidBehavior(f"decimal notation not allowed, use num/den: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidBehavior(f"not a rational: {value!r}") from exc
    raise InvalidBehavior(f"inexact or unsupported value {value!r} ({type(value).__name__})")


def format_fraction(q: Fraction) -> str:
    return str(q)


@dataclass(frozen=True)
class Scenario:
    """Per-party output and input cardinalities."""

    outputs: tuple[int, ...]
    inputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(int(d) for d in self.outputs))
        object.__setattr__(self, "inputs", tuple(int(m) for m in self.inputs))
        if len(self.outputs) != len(self.inputs) or not self.outputs:
            raise ValueError("outputs and inputs must be non-empty and of equal length")
        if min(self.outputs + self.inputs) < 1:
            raise ValueError("all cardinalities must be >= 1")

    @classmethod
    def bipartite(cls, A: int, B: int, X: int, Y: int) -> "Scenario":
        """The two-party scenario with output counts (A, B) and input counts (X, Y)."""
        return cls((A, B), (X, Y))

    @classmethod
    def parse(cls, text: str) -> "Scenario":
        """Parse ``"d1,d2,m1,m2"`` (two parties) into a scenario."""
        parts = [int(p) for p in text.replace(" ", "").split(",") if p]
        if len(parts) % 2 or not parts:
            raise ValueError(f"scenario needs outputs then inputs, got {text!r}")
        n = len(parts) // 2
        return cls(tuple(parts[:n]), tuple(parts[n:]))

    @property
    def party_count(self) -> int:
        return len(self.outputs)

    @property
    def n_input_tuples(self) -> int:
        return math.prod(self.inputs)

    @property
    def n_output_tuples(self) -> int:
        return math.prod(self.outputs)

    @property
    def dim(self) -> int:
        return self.n_input_tuples * self.n_output_tuples

    def input_tuples(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(m) for m in self.inputs)))

    def output_tuples(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(d) for d in self.outputs)))

    @cached_property
    def index(self) -> "CoordinateIndex":
        return CoordinateIndex(self)

    def require_parties(self, n: int) -> None:
        if self.party_count != n:
            raise WrongPartyCount(f"expected {n} parties, scenario has {self.party_count}")

    def to_dict(self) -> dict:
        return {"outputs": list(self.outputs), "inputs": list(self.inputs)}

    def __str__(self) -> str:
        return ",".join(map(str, self.outputs + self.inputs))


class CoordinateIndex:
    """Bijection between (a⃗, x⃗) pairs and flat coordinates 0..D-1."""

    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.n_out = scenario.n_output_tuples
        self._out_strides = _strides(scenario.outputs)
        self._in_strides = _strides(scenario.inputs)

    def __len__(self) -> int:
        return self.scenario.dim

    def flat(self, outputs: Sequence[int], inputs: Sequence[int]) -> int:
        s = self.scenario
        if len(outputs) != s.party_count or len(inputs) != s.party_count:
            raise IndexOutOfRange("tuple length does not match party count")
        for v, card in zip(tuple(outputs) + tuple(inputs), s.outputs + s.inputs):
            if not 0 <= v < card:
                raise IndexOutOfRange(f"value {v} outside range {card}")
        x = sum(v * st for v, st in zip(inputs, self._in_strides))
        a = sum(v * st for v, st in zip(outputs, self._out_strides))
        return x * self.n_out + a

    def unflat(self, k: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        if not 0 <= k < len(self):
            raise IndexOutOfRange(k)
        x, a = divmod(k, self.n_out)
        return _digits(a, self.scenario.outputs), _digits(x, self.scenario.inputs)

    def label(self, k: int) -> str:
        a, x = self.unflat(k)
        return f"p({','.join(map(str, a))}|{','.join(map(str, x))})"


def _strides(cards: Sequence[int]) -> list[int]:
    strides, acc = [], 1
    for c in reversed(cards):
        strides.append(acc)
        acc *= c
    return strides[::-1]


def _digits(value: int, cards: Sequence[int]) -> tuple[int, ...]:
    out = []
    for c in reversed(cards):
        value, r = divmod(value, c)
        out.append(r)
    return tuple(reversed(out))


@dataclass(frozen=True)
class TimingRegime:
    """Which relative-timing assumption selects the NBTS constraint set.

    ``tag`` is ``"indefinite"``, ``"parallel"`` or ``"sequential"``; for the
    latter ``order`` lists party indices from earliest to latest.
    """

    tag: str
    order: tuple[int, ...] = ()

    def __post_init__(self):
        if self.tag not in ("indefinite", "parallel", "sequential"):
            raise ValueError(f"unknown timing regime {self.tag!r}")
        if self.tag == "sequential":
            order = tuple(self.order)
            if sorted(order) != list(range(len(order))) or not order:
                raise ValueError(f"sequential order must be a permutation, got {order}")
            object.__setattr__(self, "order", order)
        elif self.order:
            raise ValueError("only sequential regimes carry an order")

    @classmethod
    def indefinite(cls) -> "TimingRegime":
        return cls("indefinite")

    @classmethod
    def parallel(cls) -> "TimingRegime":
        return cls("parallel")

    @classmethod
    def sequential(cls, order: Iterable[int] = (0, 1)) -> "TimingRegime":
        return cls("sequential", tuple(order))

    @classmethod
    def parse(cls, text: str) -> "TimingRegime":
        """Parse ``indefinite``, ``parallel`` or ``seq:AB`` / ``seq:BA`` style names."""
        t = text.strip().lower()
        if t in ("indefinite", "indef"):
            return cls.indefinite()
        if t in ("parallel", "par"):
            return cls.parallel()
        if t.startswith("seq:") or t.startswith("sequential:"):
            letters = t.split(":", 1)[1].upper().replace("->", "").replace("→", "")
            return cls.sequential(PARTY_NAMES.index(ch) for ch in letters)
        raise ValueError(f"unknown regime {text!r}")

    def forbidden_inputs(self, party: int, n_parties: int) -> tuple[int, ...]:
        """Input coordinates party ``party``'s marginal must not depend on."""
        if self.tag == "indefinite":
            return (party,)
        if self.tag == "parallel":
            return tuple(range(n_parties))
        if len(self.order) != n_parties:
            raise WrongPartyCount(
                f"sequential order covers {len(self.order)} parties, scenario has {n_parties}"
            )
        pos = self.order.index(party)
        return tuple(sorted(self.order[pos:]))

    def __str__(self) -> str:
        if self.tag == "sequential":
            return "seq:" + "".join(PARTY_NAMES[i] for i in self.order)
        return self.tag


@dataclass(frozen=True)
class Behavior:
    """Exact conditional distribution p(a⃗|x⃗) over a scenario."""

    scenario: Scenario
    values: tuple[Fraction, ...] = field(repr=False)

    def __post_init__(self):
        vals = tuple(to_fraction(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        s = self.scenario
        if len(vals) != s.dim:
            raise InvalidBehavior(f"table has {len(vals)} entries, scenario needs {s.dim}")
        if any(v < 0 for v in vals):
            raise InvalidBehavior("negative probability")
        n_out = s.n_output_tuples
        for k in range(s.n_input_tuples):
            total = sum(vals[k * n_out:(k + 1) * n_out])
            if total != 1:
                x = _digits(k, s.inputs)
                raise InvalidBehavior(f"probabilities for inputs {x} sum to {total}, not 1")

    @classmethod
    def from_function(cls, scenario: Scenario, fn: Callable[..., object]) -> "Behavior":
        """Build from ``fn(outputs, inputs)`` evaluated on every coordinate."""
        idx = scenario.index
        return cls(scenario, tuple(fn(*idx.unflat(k)) for k in range(scenario.dim)))

    @classmethod
    def deterministic(cls, scenario: Scenario, response: Callable[[tuple], tuple]) -> "Behavior":
        """Behavior with outputs ``response(x⃗)`` produced with certainty."""
        return cls.from_function(scenario, lambda a, x: int(tuple(response(x)) == a))

    @classmethod
    def uniform(cls, scenario: Scenario) -> "Behavior":
        q = Fraction(1, scenario.n_output_tuples)
        return cls(scenario, (q,) * scenario.dim)

    def prob(self, outputs: Sequence[int], inputs: Sequence[int]) -> Fraction:
        return self.values[self.scenario.index.flat(outputs, inputs)]

    def __call__(self, *args: int) -> Fraction:
        """Shorthand ``p(a, b, x, y)``: outputs first, then inputs."""
        n = self.scenario.party_count
        if len(args) != 2 * n:
            raise IndexOutOfRange(f"expected {2 * n} arguments")
        return self.prob(args[:n], args[n:])

    def is_deterministic(self) -> bool:
        return all(v in (0, 1) for v in self.values)

    def response(self, inputs: Sequence[int]) -> tuple[int, ...]:
        """Output tuple of a deterministic behavior at ``inputs``."""
        s = self.scenario
        for a in s.output_tuples():
            if self.prob(a, inputs) == 1:
                return a
        raise InvalidBehavior("behavior is not deterministic at these inputs")

    def zero_count(self) -> int:
        return sum(1 for v in self.values if v == 0)

    def as_vector(self) -> list[Fraction]:
        return list(self.values)

    # JSON ------------------------------------------------------------------

    def to_nested(self) -> list:
        s = self.scenario
        shape = list(s.inputs) + list(s.outputs)
        return _nest([format_fraction(v) for v in self.values], shape)

    def to_dict(self) -> dict:
        return {"scenario": self.scenario.to_dict(), "p": self.to_nested()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Behavior":
        try:
            sc = data["scenario"]
            scenario = Scenario(tuple(sc["outputs"]), tuple(sc["inputs"]))
            nested = data["p"]
        except (KeyError, TypeError) as exc:
            raise InvalidBehavior(f"malformed behavior JSON: {exc}") from exc
        shape = list(scenario.inputs) + list(scenario.outputs)
        flat = _flatten(nested, shape)
        return cls(scenario, tuple(to_fraction(v) for v in flat))

    @classmethod
    def from_json(cls, text: str) -> "Behavior":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidBehavior(f"invalid JSON: {exc}") from exc
        return cls.from_dict(data)


def _nest(flat: list, shape: list[int]) -> list:
    if len(shape) == 1:
        return list(flat)
    step = len(flat) // shape[0]
    return [_nest(flat[i * step:(i + 1) * step], shape[1:]) for i in range(shape[0])]


def _flatten(nested, shape: list[int]) -> list:
    if not isinstance(nested, list) or len(nested) != shape[0]:
        raise InvalidBehavior(f"nested table does not match shape {shape}")
    if len(shape) == 1:
        for v in nested:
            if isinstance(v, list):
                raise InvalidBehavior("table nested too deeply")
        return list(nested)
    out = []
    for sub in nested:
        out.extend(_flatten(sub, shape[1:]))
    return out


# Operations ------------------------------------------------------------------


def marginal(b: Behavior, party: int) -> dict[tuple[int, tuple[int, ...]], Fraction]:
    """p_i(a_i | x⃗): sum over every other party's output."""
    s = b.scenario
    if not 0 <= party < s.party_count:
        raise IndexOutOfRange(f"party {party} out of range for {s.party_count} parties")
    out: dict[tuple[int, tuple[int, ...]], Fraction] = {}
    for x in s.input_tuples():
        for a in s.output_tuples():
            key = (a[party], x)
            out[key] = out.get(key, Fraction(0)) + b.prob(a, x)
    return out


@dataclass(frozen=True)
class Violation:
    """One failed equality: ``lhs`` at ``inputs`` differs from ``rhs`` at ``reference``."""

    party: int | None
    outputs: tuple[int, ...]
    inputs: tuple[int, ...]
    reference: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction

    def to_dict(self) -> dict:
        return {
            "party": self.party,
            "outputs": list(self.outputs),
            "inputs": list(self.inputs),
            "reference": list(self.reference),
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
        }


@dataclass(frozen=True)
class CheckReport:
    holds: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {"holds": self.holds, "violations": [v.to_dict() for v in self.violations]}


def reference_inputs(x: tuple[int, ...], forbidden: Iterable[int]) -> tuple[int, ...]:
    """Canonical representative of ``x`` with forbidden coordinates set to 0."""
    fb = set(forbidden)
    return tuple(0 if i in fb else v for i, v in enumerate(x))


def check_nbts(b: Behavior, regime: TimingRegime) -> CheckReport:
    """Test the regime's no-backwards-in-time-signalling equalities exactly.

    Each party's marginal is compared against its value at the reference
    input tuple in which every coordinate the regime forbids dependence on is
    zero; every differing entry is reported.
    """
    s = b.scenario
    n = s.party_count
    violations = []
    for party in range(n):
        forbidden = regime.forbidden_inputs(party, n)
        marg = marginal(b, party)
        for x in s.input_tuples():
            ref = reference_inputs(x, forbidden)
            if ref == x:
                continue
            for ai in range(s.outputs[party]):
                lhs, rhs = marg[(ai, x)], marg[(ai, ref)]
                if lhs != rhs:
                    violations.append(Violation(party, (ai,), x, ref, lhs, rhs))
    return CheckReport(not violations, tuple(violations))


def check_classicality_equalities(b: Behavior) -> CheckReport:
    """Check p(a,b|x,y) + p(a,b|x',y') = p(a,b|x,y') + p(a,b|x',y) everywhere."""
    s = b.scenario
    s.require_parties(2)
    X, Y = s.inputs
    violations = []
    for a, bb in s.output_tuples():
        for x, x2 in itertools.combinations(range(X), 2):
            for y, y2 in itertools.combinations(range(Y), 2):
                lhs = b(a, bb, x, y) + b(a, bb, x2, y2)
                rhs = b(a, bb, x, y2) + b(a, bb, x2, y)
                if lhs != rhs:
                    violations.append(Violation(None, (a, bb), (x, y, x2, y2), (x, y2, x2, y), lhs, rhs))
    return CheckReport(not violations, tuple(violations))


def mix(behaviors: Sequence[Behavior], weights: Sequence) -> Behavior:
    """Exact convex combination of behaviors sharing one scenario."""
    if not behaviors or len(behaviors) != len(weights):
        raise WeightError("need one weight per behavior and at least one behavior")
    ws = [to_fraction(w) for w in weights]
    if any(w < 0 for w in ws) or sum(ws) != 1:
        raise WeightError("weights must be non-negative and sum to 1")
    scenario = behaviors[0].scenario
    if any(bh.scenario != scenario for bh in behaviors):
        raise ScenarioMismatch("behaviors come from different scenarios")
    values = [Fraction(0)] * scenario.dim
    for bh, w in zip(behaviors, ws):
        if w:
            values = [v + w * p for v, p in zip(values, bh.values)]
    return Behavior(scenario, tuple(values))


def swap_parties(b: Behavior) -> Behavior:
    """Exchange the roles of the two parties of a bipartite behavior."""
    s = b.scenario
    s.require_parties(2)
    t = Scenario(s.outputs[::-1], s.inputs[::-1])
    return Behavior.from_function(t, lambda a, x: b.prob(a[::-1], x[::-1]))
