"""Labeled complex tensors and the bullet composition.

Every process carries, for each wire, a ket-side index and a bra-side
index.  An output wire O has its ket-side index raised and its bra-side
index lowered; an input wire I has them the other way round.  The bullet
contracts indices with equal (wire, side) and opposite variance, and takes
the tensor product over everything else.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from ..errors import DimensionMismatch, IndexCollision, NonScalarResult

KET, BRA = "ket", "bra"
UP, DOWN = "up", "down"


@dataclass(frozen=True)
class WireIndex:
    wire: str
    side: str
    var: str
    dim: int

    def __post_init__(self):
        if self.side not in (KET, BRA):
            raise ValueError(f"side must be 'ket' or 'bra', got {self.side!r}")
        if self.var not in (UP, DOWN):
            raise ValueError(f"variance must be 'up' or 'down', got {self.var!r}")
        if self.dim < 1:
            raise ValueError("wire dimension must be >= 1")

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.wire, self.side, self.var)

    @property
    def partner_key(self) -> tuple[str, str, str]:
        return (self.wire, self.side, DOWN if self.var == UP else UP)

    def to_dict(self) -> dict:
        return {"wire": self.wire, "side": self.side, "var": self.var, "dim": self.dim}


def output_indices(wire: str, dim: int) -> tuple[WireIndex, WireIndex]:
    return WireIndex(wire, KET, UP, dim), WireIndex(wire, BRA, DOWN, dim)


def input_indices(wire: str, dim: int) -> tuple[WireIndex, WireIndex]:
    return WireIndex(wire, KET, DOWN, dim), WireIndex(wire, BRA, UP, dim)


class LabeledTensor:
    """Dense complex array whose axes are named by :class:`WireIndex` objects."""

    __slots__ = ("indices", "data")

    def __init__(self, indices: Sequence[WireIndex], data):
        self.indices = tuple(indices)
        arr = np.asarray(data, dtype=complex)
        shape = tuple(ix.dim for ix in self.indices)
        if arr.shape != shape:
            try:
                arr = arr.reshape(shape)
            except ValueError:
                raise DimensionMismatch(f"data shape {arr.shape} does not match indices {shape}") from None
        keys = [ix.key for ix in self.indices]
        if len(set(keys)) != len(keys):
            raise IndexCollision(f"repeated index in {keys}")
        arr.setflags(write=False)
        self.data = arr

    @classmethod
    def scalar(cls, value: complex) -> "LabeledTensor":
        return cls((), np.asarray(value, dtype=complex))

    @property
    def wires(self) -> set[str]:
        return {ix.wire for ix in self.indices}

    def wire_dim(self, wire: str) -> int:
        for ix in self.indices:
            if ix.wire == wire:
                return ix.dim
        raise KeyError(wire)

    def keys(self) -> list[tuple[str, str, str]]:
        return [ix.key for ix in self.indices]

    def is_scalar(self) -> bool:
        return not self.indices

    def value(self) -> complex:
        if self.indices:
            raise NonScalarResult(f"tensor still has open indices {self.keys()}")
        return complex(self.data)

    def aligned(self, order: Sequence[tuple[str, str, str]]) -> np.ndarray:
        """Data transposed so axes follow ``order`` (a permutation of the keys)."""
        keys = self.keys()
        if sorted(order) != sorted(keys):
            raise IndexCollision(f"index sets differ: {sorted(keys)} vs {sorted(order)}")
        return np.transpose(self.data, [keys.index(k) for k in order])

    def _binary(self, other: "LabeledTensor", op) -> "LabeledTensor":
        return LabeledTensor(self.indices, op(self.data, other.aligned(self.keys())))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, c):
        return LabeledTensor(self.indices, self.data * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return LabeledTensor(self.indices, self.data / c)

    def max_abs_diff(self, other: "LabeledTensor") -> float:
        if not self.indices and not other.indices:
            return float(abs(self.value() - other.value()))
        return float(np.max(np.abs(self.data - other.aligned(self.keys()))))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def relabel(self, mapping: dict[str, str]) -> "LabeledTensor":
        idx = [WireIndex(mapping.get(ix.wire, ix.wire), ix.side, ix.var, ix.dim) for ix in self.indices]
        return LabeledTensor(idx, self.data)

    # operator picture ------------------------------------------------------

    def operator_layout(self) -> tuple[list[WireIndex], list[WireIndex]]:
        """Ket-side indices sorted by wire, and their bra-side partners."""
        kets = sorted((ix for ix in self.indices if ix.side == KET), key=lambda ix: ix.wire)
        by_key = {ix.key: ix for ix in self.indices}
        bras = []
        for k in kets:
            partner = by_key.get((k.wire, BRA, DOWN if k.var == UP else UP))
            if partner is None:
                raise IndexCollision(f"wire {k.wire} has no matching bra-side index")
            bras.append(partner)
        if len(bras) + len(kets) != len(self.indices):
            raise IndexCollision("unpaired bra-side index")
        return kets, bras

    def to_operator(self) -> np.ndarray:
        kets, bras = self.operator_layout()
        arr = self.aligned([ix.key for ix in kets + bras])
        n = int(np.prod([ix.dim for ix in kets])) if kets else 1
        return arr.reshape(n, n)

    def is_positive(self, tol: float = 1e-9) -> bool:
        """Hermitian positive semidefinite in the operator picture."""
        m = self.to_operator()
        scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
        if np.max(np.abs(m - m.conj().T), initial=0.0) > tol * scale:
            return False
        return bool(np.min(np.linalg.eigvalsh((m + m.conj().T) / 2), initial=0.0) >= -tol * scale)

    # serialisation ---------------------------------------------------------

    def to_dict(self) -> dict:
        flat = self.data.reshape(-1)
        return {
            "indices": [ix.to_dict() for ix in self.indices],
            "re": [float(v) for v in flat.real],
            "im": [float(v) for v in flat.imag],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "LabeledTensor":
        idx = [WireIndex(d["wire"], d["side"], d["var"], int(d["dim"])) for d in data["indices"]]
        re = np.asarray(data["re"], dtype=float)
        im = np.asarray(data.get("im", [0.0] * len(re)), dtype=float)
        return cls(idx, re + 1j * im)

    @classmethod
    def from_json(cls, text: str) -> "LabeledTensor":
        return cls.from_dict(json.loads(text))

    def __repr__(self) -> str:
        labels = ", ".join(f"{ix.wire}:{ix.side}:{ix.var}" for ix in self.indices)
        return f"LabeledTensor([{labels}])"


def _bullet2(t1: LabeledTensor, t2: LabeledTensor) -> LabeledTensor:
    keys2 = {ix.key: n for n, ix in enumerate(t2.indices)}
    ax1, ax2 = [], []
    for n, ix in enumerate(t1.indices):
        if ix.key in keys2:
            raise IndexCollision(f"both tensors carry index {ix.key}")
        m = keys2.get(ix.partner_key)
        if m is not None:
            if t2.indices[m].dim != ix.dim:
                raise DimensionMismatch(f"wire {ix.wire} has dims {ix.dim} and {t2.indices[m].dim}")
            ax1.append(n)
            ax2.append(m)
    data = np.tensordot(t1.data, t2.data, axes=(ax1, ax2))
    rest = [ix for n, ix in enumerate(t1.indices) if n not in ax1]
    rest += [ix for m, ix in enumerate(t2.indices) if m not in ax2]
    return LabeledTensor(rest, data)


def bullet(*tensors: LabeledTensor) -> LabeledTensor:
    """Compose processes left to right."""
    if not tensors:
        raise ValueError("bullet needs at least one tensor")
    return reduce(_bullet2, tensors)


def tensor_sum(tensors: Iterable[LabeledTensor]) -> LabeledTensor:
    return reduce(lambda a, b: a + b, tensors)
