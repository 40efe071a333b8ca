"""Exact Gaussian elimination over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[Fraction]]


def _copy(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(v) for v in r] for r in rows]


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns the non-zero rows and pivot columns."""
    m = _copy(rows)
    if not m:
        return [], []
    ncols = len(m[0]) if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [v / pv for v in m[r]]
        row = m[r]
        nz = [j for j in range(c, ncols) if row[j] != 0]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f != 0:
                    mi = m[i]
                    for j in nz:
                        mi[j] -= f * row[j]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> Matrix:
    """Basis of {z : rows · z = 0}, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve_affine(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> list[Fraction] | None:
    """One solution of rows · z = rhs (free variables set to 0), or None."""
    aug = [list(r) + [rhs_i] for r, rhs_i in zip(rows, rhs)]
    if not aug:
        return [Fraction(0)] * ncols
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    z = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        z[p] = row[ncols]
    return z


def solve_unique(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> list[Fraction] | None:
    """The unique solution of rows · z = rhs, or None if none or not unique."""
    aug = [list(r) + [rhs_i] for r, rhs_i in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots or len(pivots) != ncols:
        return None
    z = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        z[p] = row[ncols]
    return z


def independent_rows(rows: Sequence[Sequence], ncols: int) -> list[int]:
    """Indices of a maximal linearly independent subset, chosen greedily in order."""
    chosen: list[int] = []
    basis: Matrix = []
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for b, p in zip(basis, pivots):
            if v[p] != 0:
                f = v[p]
                v = [vi - f * bi for vi, bi in zip(v, b)]
        p = next((c for c in range(ncols) if v[c] != 0), None)
        if p is None:
            continue
        pv = v[p]
        v = [vi / pv for vi in v]
        for k, b in enumerate(basis):
            if b[p] != 0:
                f = b[p]
                basis[k] = [bi - f * vi for bi, vi in zip(b, v)]
        basis.append(v)
        pivots.append(p)
        chosen.append(idx)
    return chosen


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


def primitive_integer(v: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to the coprime integer vector on the same ray."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return [x // g for x in ints] if g > 1 else ints
