"""Probability rule and the single/two-party checks on two-time states."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import NonScalarResult, WrongWireSet, ZeroDenominator
from . import config
from .processes import (
    Measurement,
    basis_vectors,
    discard_randomize,
    identity_channel,
    identity_vector,
    measure_prepare,
    throw_away_replace,
    tomographic_unitaries,
    unitary_channel,
)
from .tensor import LabeledTensor, bullet


def _scalar(t: LabeledTensor) -> complex:
    if not t.is_scalar():
        raise NonScalarResult(f"composition leaves open indices {t.keys()}")
    return t.value()


def probability(eta: LabeledTensor, measurements: Sequence[Measurement],
                channels: Sequence[LabeledTensor] = (), tol: float | None = None) -> dict[tuple[int, ...], float]:
    """Outcome distribution of the measurements (with fixed channels) on η.

    Each outcome tuple gets the composed numerator divided by the
    composition with every measurement summed over its outcomes.
    """
    tol = config.resolve(tol)
    base = bullet(eta, *channels) if channels else eta
    denom = _scalar(bullet(base, *[m.total() for m in measurements]))
    if abs(denom) <= tol:
        raise ZeroDenominator(f"post-selection probability {abs(denom):.3g} is below tolerance")
    out = {}
    for combo in itertools.product(*[m.outcomes for m in measurements]):
        num = _scalar(bullet(base, *[m[a] for m, a in zip(measurements, combo)]))
        out[combo] = (num / denom).real
    return out


def probability_complex(eta, measurements, channels=()) -> dict[tuple[int, ...], complex]:
    """As :func:`probability` but without discarding imaginary parts."""
    base = bullet(eta, *channels) if channels else eta
    denom = _scalar(bullet(base, *[m.total() for m in measurements]))
    return {combo: _scalar(bullet(base, *[m[a] for m, a in zip(measurements, combo)])) / denom
            for combo in itertools.product(*[m.outcomes for m in measurements])}


# single-party witness -------------------------------------------------------


@dataclass(frozen=True)
class WitnessReport:
    nbts: bool
    worst_deviation: float
    witness: dict | None
    tested: int = 0
    skipped: int = 0

    def to_dict(self) -> dict:
        return {"nbts": self.nbts, "worst_deviation": self.worst_deviation, "witness": self.witness,
                "tested": self.tested, "skipped": self.skipped}


def witness_measurements(d_in: int, d_mid: int, in_wire: str, mid_wire: str) -> list[tuple[str, Measurement]]:
    """Destructive basis measurements with |0⟩ re-preparation, then discard-and-randomise."""
    out = [("computational", measure_prepare(basis_vectors(d_in), in_wire, mid_wire, out_dim=d_mid))]
    for r, s in itertools.combinations(range(d_in), 2):
        for kind in ("plus", "plus_i"):
            out.append((f"{kind}({r},{s})",
                        measure_prepare(basis_vectors(d_in, kind, r, s), in_wire, mid_wire, out_dim=d_mid)))
    out.append(("discard-randomize", discard_randomize(in_wire, mid_wire, d_in, d_mid)))
    return out


def nbts_witness_single(eta: LabeledTensor, in_wire: str = "A1", out_wire: str = "A3", mid_wire: str = "A2",
                        tol: float | None = None) -> WitnessReport:
    """Search the standard test family for backwards-in-time signalling of one party.

    ``in_wire`` is the party's input (η's output) and ``out_wire`` the
    party's output (η's input).  Channels for which the post-selection
    probability vanishes are skipped; if every channel vanishes for some
    measurement, :class:`ZeroDenominator` is raised.
    """
    tol = config.resolve(tol)
    if eta.wires != {in_wire, out_wire}:
        raise WrongWireSet(f"expected wires {{{in_wire}, {out_wire}}}, got {sorted(eta.wires)}")
    d_in, d_out = eta.wire_dim(in_wire), eta.wire_dim(out_wire)
    channels = [(name, unitary_channel(U, mid_wire, out_wire)) for name, U in tomographic_unitaries(d_out)]
    worst, witness, tested, skipped = 0.0, None, 0, 0
    for mname, meas in witness_measurements(d_in, d_out, in_wire, mid_wire):
        rows = []
        for cname, ch in channels:
            try:
                rows.append((cname, probability(eta, [meas], [ch], tol)))
                tested += 1
            except ZeroDenominator:
                skipped += 1
        if not rows:
            raise ZeroDenominator(f"post-selection vanishes for every channel under {mname}")
        for a in meas.outcomes:
            vals = [(p[(a,)], cname) for cname, p in rows]
            (lo, c_lo), (hi, c_hi) = min(vals), max(vals)
            if hi - lo > worst:
                worst = hi - lo
                witness = {"measurement": mname, "outcome": a, "channels": [c_lo, c_hi], "probabilities": [lo, hi]}
    return WitnessReport(worst <= tol, float(worst), witness if worst > tol else None, tested, skipped)


# structural forms -----------------------------------------------------------


@dataclass(frozen=True)
class StructureReport:
    matches: bool
    residual: float
    extracted: LabeledTensor | None = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {"matches": self.matches, "residual": self.residual,
                "extracted": None if self.extracted is None else self.extracted.to_dict()}


FORMS = ("product_identity_single", "product_identity_pair", "sequential_B_identity")


def _mid(wire: str) -> str:
    return wire[:-1] + "2" if wire.endswith("3") else wire + "'"


def _fixed_point_residual(eta: LabeledTensor, wires: Sequence[str]) -> tuple[float, LabeledTensor]:
    """‖T•η − I•η‖_max with T, I acting from each wire w to its mid wire, scaled by ‖η‖_max."""
    lhs, rhs = eta, eta
    for w in wires:
        d = eta.wire_dim(w)
        lhs = bullet(throw_away_replace(_mid(w), w, d), lhs)
        rhs = bullet(identity_channel(_mid(w), w, d), rhs)
    scale = eta.max_abs()
    res = lhs.max_abs_diff(rhs) / scale if scale > 0 else 0.0
    return res, lhs


def structural_form_check(eta: LabeledTensor, form: str, tol: float | None = None) -> StructureReport:
    """Test η ∝ (reduced part) ⊗ 𝕀 on the designated input wires through T•η = I•η.

    The residual is taken relative to the largest entry of η so that the
    verdict does not depend on η's overall scale.  When the form matches,
    ``extracted`` is the reduced part, e.g. ρ^{A1} with ρ = η • 𝕀^{A3} / d_{A3}.
    """
    tol = config.resolve(tol)
    required = {"product_identity_single": ({"A1", "A3"}, ["A3"]),
                "product_identity_pair": ({"A1", "A3", "B1", "B3"}, ["A3", "B3"]),
                "sequential_B_identity": ({"A1", "A3", "B1", "B3"}, ["B3"])}
    if form not in required:
        raise ValueError(f"unknown form {form!r}; choose from {FORMS}")
    wires, targets = required[form]
    if eta.wires != wires:
        raise WrongWireSet(f"form {form} needs wires {sorted(wires)}, got {sorted(eta.wires)}")
    res, _ = _fixed_point_residual(eta, targets)
    extracted = None
    if res <= tol:
        extracted = eta
        for w in targets:
            d = eta.wire_dim(w)
            extracted = bullet(extracted, identity_vector(w, d, raised=True)) / d
    return StructureReport(res <= tol, float(res), extracted)


# linearity ------------------------------------------------------------------


@dataclass(frozen=True)
class LinearityReport:
    linear: bool
    residuals: tuple[float, float, float, float]

    def to_dict(self) -> dict:
        return {"linear": self.linear, "residuals": list(self.residuals)}


def _apply(eta: LabeledTensor, ops: Sequence[LabeledTensor]) -> LabeledTensor:
    return bullet(*ops, eta)


def is_linear_two_time(eta: LabeledTensor, tol: float | None = None) -> LinearityReport:
    """The four conditions under which composition needs no renormalising denominator."""
    tol = config.resolve(tol)
    if eta.wires != {"A1", "A3", "B1", "B3"}:
        raise WrongWireSet(f"expected wires A1, A3, B1, B3, got {sorted(eta.wires)}")
    dA1, dA3, dB1, dB3 = (eta.wire_dim(w) for w in ("A1", "A3", "B1", "B3"))

    def I(w, d):  # identity channel from w2 to w3
        return identity_channel(w + "2", w + "3", d)

    def T(w, d):  # T from w2 to w3
        return throw_away_replace(w + "2", w + "3", d)

    def T_close(w, d_in, d_out):  # T from w1 to w3: closes the whole lab
        return throw_away_replace(w + "1", w + "3", (d_in, d_out))

    full = _scalar(bullet(identity_vector("A1", dA1), identity_vector("A3", dA3, raised=True),
                          identity_vector("B1", dB1), identity_vector("B3", dB3, raised=True), eta))
    r1 = abs(full - dA3 * dB3)

    tb = T_close("B", dB1, dB3)
    r2 = _apply(eta, [I("A", dA3), tb]).max_abs_diff(_apply(eta, [T("A", dA3), tb]))

    ta = T_close("A", dA1, dA3)
    r3 = _apply(eta, [ta, I("B", dB3)]).max_abs_diff(_apply(eta, [ta, T("B", dB3)]))

    ii = _apply(eta, [I("A", dA3), I("B", dB3)])
    it = _apply(eta, [I("A", dA3), T("B", dB3)])
    ti = _apply(eta, [T("A", dA3), I("B", dB3)])
    tt = _apply(eta, [T("A", dA3), T("B", dB3)])
    r4 = ii.max_abs_diff(it + ti - tt)

    residuals = (float(r1), float(r2), float(r3), float(r4))
    return LinearityReport(all(r <= tol for r in residuals), residuals)
