"""Standard processes: states, effects, channels, measurements and random samplers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ..errors import NotPositive, WrongWireSet
from . import config
from .tensor import BRA, DOWN, KET, UP, LabeledTensor, WireIndex, bullet, tensor_sum


def _as_list(wires) -> list[str]:
    return [wires] if isinstance(wires, str) else list(wires)


def _as_dims(dims, n: int) -> list[int]:
    if isinstance(dims, (int, np.integer)):
        return [int(dims)] * n
    dims = [int(d) for d in dims]
    if len(dims) != n:
        raise ValueError(f"expected {n} dimensions, got {len(dims)}")
    return dims


def from_operator(op, outputs: Sequence[str] = (), out_dims=(), inputs: Sequence[str] = (),
                  in_dims=(), check: bool = False, tol: float | None = None) -> LabeledTensor:
    """Tensor whose operator picture (ket side × bra side) is ``op``.

    Row index runs over output wires then input wires, in the given order.
    """
    outputs, inputs = _as_list(outputs), _as_list(inputs)
    out_dims, in_dims = _as_dims(out_dims, len(outputs)), _as_dims(in_dims, len(inputs))
    kets = [WireIndex(w, KET, UP, d) for w, d in zip(outputs, out_dims)]
    kets += [WireIndex(w, KET, DOWN, d) for w, d in zip(inputs, in_dims)]
    bras = [WireIndex(w, BRA, DOWN, d) for w, d in zip(outputs, out_dims)]
    bras += [WireIndex(w, BRA, UP, d) for w, d in zip(inputs, in_dims)]
    t = LabeledTensor(kets + bras, np.asarray(op, dtype=complex))
    if check:
        require_positive(t, tol)
    return t


def require_positive(t: LabeledTensor, tol: float | None = None) -> LabeledTensor:
    if not t.is_positive(config.resolve(tol)):
        raise NotPositive(f"{t!r} is not Hermitian positive semidefinite")
    return t


# states and effects ---------------------------------------------------------


def state(rho, wires="A1", dims=None) -> LabeledTensor:
    """Density operator ρ on one or more output wires (validated)."""
    wires = _as_list(wires)
    rho = np.asarray(rho, dtype=complex)
    if dims is None:
        dims = _split_dim(rho.shape[0], len(wires))
    return from_operator(rho, wires, dims, check=True)


def effect(E, wires="A3", dims=None) -> LabeledTensor:
    """Post-selection operator E on input wires; contracting with a state gives tr(Eρ)."""
    wires = _as_list(wires)
    E = np.asarray(E, dtype=complex)
    if dims is None:
        dims = _split_dim(E.shape[0], len(wires))
    return from_operator(E.T, inputs=wires, in_dims=dims, check=True)


def pure_state(psi, wire="A1") -> LabeledTensor:
    psi = np.asarray(psi, dtype=complex)
    return state(np.outer(psi, psi.conj()), wire)


def pure_effect(phi, wire="A3") -> LabeledTensor:
    phi = np.asarray(phi, dtype=complex)
    return effect(np.outer(phi, phi.conj()), wire)


def _split_dim(total: int, n: int) -> list[int]:
    d = round(total ** (1.0 / n))
    if d ** n != total:
        raise ValueError(f"cannot split dimension {total} evenly over {n} wires; pass dims")
    return [d] * n


def identity_vector(wire: str, dim: int = 2, raised: bool = False) -> LabeledTensor:
    """Σ_i |i⟩⊗⟨i| on one wire.

    The lowered form 𝕀_w is the discard effect on an input wire; the raised
    form 𝕀^w is the unnormalised maximally mixed state on an output wire.
    """
    eye = np.eye(dim)
    return from_operator(eye, [wire], [dim]) if raised else from_operator(eye, inputs=[wire], in_dims=[dim])


# channels -------------------------------------------------------------------


def channel_from_kraus(kraus, in_wires="A2", out_wires="A3", in_dims=None, out_dims=None,
                       check: bool = True) -> LabeledTensor:
    """Σ_k K_k ⊗ K_k^* arranged as a process from ``in_wires`` to ``out_wires``."""
    ks = [np.asarray(k, dtype=complex) for k in kraus]
    in_wires, out_wires = _as_list(in_wires), _as_list(out_wires)
    if in_dims is None:
        in_dims = _split_dim(ks[0].shape[1], len(in_wires))
    if out_dims is None:
        out_dims = _split_dim(ks[0].shape[0], len(out_wires))
    vecs = np.stack([k.reshape(-1) for k in ks])  # rows vec(K)[(out, in)]
    op = vecs.T @ vecs.conj()
    return from_operator(op, out_wires, out_dims, in_wires, in_dims, check=check)


def unitary_channel(U, in_wire="A2", out_wire="A3") -> LabeledTensor:
    return channel_from_kraus([U], in_wire, out_wire)


def identity_channel(in_wire="A2", out_wire="A3", dim: int = 2) -> LabeledTensor:
    return channel_from_kraus([np.eye(dim)], in_wire, out_wire)


def throw_away_replace(in_wire="A2", out_wire="A3", dims=2) -> LabeledTensor:
    """T = (1/d_out) 𝕀^{out} ⊗ 𝕀_{in}.  ``dims`` is d or (d_in, d_out)."""
    d_in, d_out = (dims, dims) if isinstance(dims, (int, np.integer)) else dims
    return bullet(identity_vector(out_wire, d_out, raised=True), identity_vector(in_wire, d_in)) / d_out


def projector_map(P, in_wire="A2", out_wire="A3") -> LabeledTensor:
    """Trace-decreasing map ρ ↦ PρP (used as a negative example)."""
    return channel_from_kraus([P], in_wire, out_wire)


def is_trace_preserving(c: LabeledTensor, in_wire="A2", out_wire="A3", tol: float | None = None) -> bool:
    """‖𝕀_{out} • c − 𝕀_{in}‖_max ≤ tol."""
    expected = {(in_wire, KET, DOWN), (in_wire, BRA, UP), (out_wire, KET, UP), (out_wire, BRA, DOWN)}
    if set(c.keys()) != expected:
        raise WrongWireSet(f"expected indices {sorted(expected)}, got {sorted(c.keys())}")
    reduced = bullet(identity_vector(out_wire, c.wire_dim(out_wire)), c)
    return reduced.max_abs_diff(identity_vector(in_wire, c.wire_dim(in_wire))) <= config.resolve(tol)


# measurements ---------------------------------------------------------------


@dataclass(frozen=True)
class Measurement:
    """Outcome-labelled processes on one in/out wire pair."""

    elements: Mapping[int, LabeledTensor]
    in_wire: str = "A1"
    out_wire: str = "A2"
    label: str = ""

    def __post_init__(self):
        keys = None
        for t in self.elements.values():
            ks = sorted(t.keys())
            if keys is not None and ks != keys:
                raise WrongWireSet("measurement elements act on different wires")
            keys = ks

    @property
    def outcomes(self) -> list[int]:
        return sorted(self.elements)

    def __getitem__(self, a: int) -> LabeledTensor:
        return self.elements[a]

    def total(self) -> LabeledTensor:
        return tensor_sum(self.elements[a] for a in self.outcomes)

    def is_valid(self, tol: float | None = None) -> bool:
        tol = config.resolve(tol)
        return all(t.is_positive(tol) for t in self.elements.values()) and is_trace_preserving(
            self.total(), self.in_wire, self.out_wire, tol)

    def relabel(self, mapping: dict[str, str]) -> "Measurement":
        return Measurement({a: t.relabel(mapping) for a, t in self.elements.items()},
                           mapping.get(self.in_wire, self.in_wire), mapping.get(self.out_wire, self.out_wire),
                           self.label)


def instrument_from_kraus(kraus_by_outcome: Sequence[Sequence[np.ndarray]], in_wire="A1", out_wire="A2",
                          label: str = "instrument") -> Measurement:
    return Measurement({a: channel_from_kraus(ks, in_wire, out_wire) for a, ks in enumerate(kraus_by_outcome)},
                       in_wire, out_wire, label)


def basis_vectors(d: int, kind: str = "computational", r: int = 0, s: int = 1) -> list[np.ndarray]:
    """Orthonormal basis: computational, or with |r⟩,|s⟩ replaced by (|r⟩±|s⟩)/√2 or (|r⟩±i|s⟩)/√2.

    The outcome order keeps positions r and s for the + and − vectors.
    """
    eye = np.eye(d, dtype=complex)
    vecs = [eye[k] for k in range(d)]
    if kind == "computational":
        return vecs
    if not (0 <= r < d and 0 <= s < d and r != s):
        raise ValueError(f"need distinct levels r, s < {d}")
    phase = {"plus": 1.0, "plus_i": 1j}.get(kind)
    if phase is None:
        raise ValueError(f"unknown basis kind {kind!r}")
    vecs[r] = (eye[r] + phase * eye[s]) / np.sqrt(2)
    vecs[s] = (eye[r] - phase * eye[s]) / np.sqrt(2)
    return vecs


def measure_prepare(basis: Sequence[np.ndarray], in_wire="A1", out_wire="A2", prepare=None,
                    out_dim: int | None = None, label: str = "measure-prepare") -> Measurement:
    """Destructive measurement in ``basis`` followed by preparing a fixed state.

    ``prepare`` defaults to |0⟩ on the output wire.
    """
    d_out = out_dim if out_dim is not None else len(basis[0])
    if prepare is None:
        prepare = np.eye(d_out, dtype=complex)[0]
    prep = pure_state(prepare, out_wire)
    return Measurement({a: bullet(prep, pure_effect(v, in_wire)) for a, v in enumerate(basis)},
                       in_wire, out_wire, label)


def projective_instrument(basis: Sequence[np.ndarray], in_wire="A1", out_wire="A2",
                          label: str = "projective") -> Measurement:
    """Non-destructive measurement: outcome a leaves |v_a⟩ on the output wire."""
    return instrument_from_kraus([[np.outer(v, np.conj(v))] for v in basis], in_wire, out_wire, label)


def discard_randomize(in_wire="A1", out_wire="A2", d_in: int = 2, d_out: int = 2) -> Measurement:
    """Discard the input, draw a uniformly and emit |a⟩."""
    eye = np.eye(d_out, dtype=complex)
    drop = identity_vector(in_wire, d_in)
    return Measurement({a: bullet(pure_state(eye[a], out_wire), drop) / d_out for a in range(d_out)},
                       in_wire, out_wire, "discard-randomize")


# unitaries ------------------------------------------------------------------


def shift(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock(d: int) -> np.ndarray:
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def fourier(d: int) -> np.ndarray:
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return np.exp(2j * np.pi * j * k / d) / np.sqrt(d)


def complete_unitary(first_column: np.ndarray) -> np.ndarray:
    """A unitary whose first column is the given unit vector."""
    v = np.asarray(first_column, dtype=complex)
    d = len(v)
    m = np.column_stack([v, np.eye(d, dtype=complex)])
    q, _ = np.linalg.qr(m)
    q = q[:, :d]
    # fix the phase QR put on the first column
    q[:, 0] *= np.vdot(q[:, 0], v)
    return q


def tomographic_unitaries(d: int) -> list[tuple[str, np.ndarray]]:
    """Identity, X^k Z^l, Fourier and two-level rotations sending |0⟩ to (|r⟩±|s⟩)/√2, (|r⟩±i|s⟩)/√2."""
    out = [("I", np.eye(d, dtype=complex))]
    X, Z = shift(d), clock(d)
    for k, l in itertools.product(range(d), repeat=2):
        if k or l:
            out.append((f"X^{k}Z^{l}", np.linalg.matrix_power(X, k) @ np.linalg.matrix_power(Z, l)))
    out.append(("F", fourier(d)))
    eye = np.eye(d, dtype=complex)
    for r, s in itertools.combinations(range(d), 2):
        for name, ph in (("+", 1), ("-", -1), ("+i", 1j), ("-i", -1j)):
            out.append((f"R{r}{s}{name}", complete_unitary((eye[r] + ph * eye[s]) / np.sqrt(2))))
    return out


NAMED_UNITARIES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
}


# random sampling ------------------------------------------------------------


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_unitary(d: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_isometry(d_in: int, d_out: int, rng=None) -> np.ndarray:
    if d_out < d_in:
        raise ValueError(f"no isometry from dimension {d_in} into {d_out}")
    return random_unitary(d_out, rng)[:, :d_in]


def random_density(d: int, rng=None, rank: int | None = None) -> np.ndarray:
    rng = _rng(rng)
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_psd(d: int, rng=None) -> np.ndarray:
    rng = _rng(rng)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return g @ g.conj().T


def random_kraus(d_in: int, d_out: int, n: int = 2, rng=None) -> list[np.ndarray]:
    """Kraus operators of a random channel, cut from a random isometry d_in → d_out·n."""
    V = random_isometry(d_in, d_out * n, rng)
    return [V[k * d_out:(k + 1) * d_out, :] for k in range(n)]


def random_channel(in_wire="A2", out_wire="A3", d_in: int = 2, d_out: int = 2, rng=None,
                   kraus_rank: int = 2) -> LabeledTensor:
    return channel_from_kraus(random_kraus(d_in, d_out, kraus_rank, rng), in_wire, out_wire)


def random_instrument(in_wire="A1", out_wire="A2", d_in: int = 2, d_out: int = 2, n_outcomes: int = 2,
                      rng=None, kraus_per_outcome: int = 1) -> Measurement:
    ks = random_kraus(d_in, d_out, n_outcomes * kraus_per_outcome, rng)
    groups = [ks[a * kraus_per_outcome:(a + 1) * kraus_per_outcome] for a in range(n_outcomes)]
    return instrument_from_kraus(groups, in_wire, out_wire, "random-instrument")
