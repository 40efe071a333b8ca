"""Exact two-phase simplex over the rationals (Bland's rule, dense tableau).

Solves ``min c·x  s.t.  A x = b, x >= 0``.  When the system is infeasible a
Farkas certificate ``y`` with ``yᵀA <= 0`` and ``yᵀb > 0`` is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL, INFEASIBLE, UNBOUNDED = "optimal", "infeasible", "unbounded"


@dataclass
class LPResult:
    status: str
    x: list[Fraction] | None = None
    objective: Fraction | None = None
    farkas: list[Fraction] | None = None


def _pivot(T: list[list[Fraction]], obj: list[Fraction], r: int, c: int) -> None:
    row = T[r]
    pv = row[c]
    if pv != 1:
        row[:] = [v / pv for v in row]
    nz = [j for j, v in enumerate(row) if v != 0]
    for i, other in enumerate(T):
        if i != r:
            f = other[c]
            if f != 0:
                for j in nz:
                    other[j] -= f * row[j]
    f = obj[c]
    if f != 0:
        for j in nz:
            obj[j] -= f * row[j]


def _run(T, obj, basis, allowed: int) -> str:
    """Minimise; ``obj`` holds reduced costs and ``-value`` in its last slot."""
    while True:
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best, leave = None, None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return UNBOUNDED
        _pivot(T, obj, leave, enter)
        basis[leave] = enter


def solve(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    m = len(A)
    n = len(c)
    cost = [Fraction(v) for v in c]
    if m == 0:
        if any(v < 0 for v in cost):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, [Fraction(0)] * n, Fraction(0))
    signs = [1 if Fraction(bi) >= 0 else -1 for bi in b]
    T = []
    for i, (row, bi) in enumerate(zip(A, b)):
        s = signs[i]
        art = [Fraction(0)] * m
        art[i] = Fraction(1)
        T.append([Fraction(v) * s for v in row] + art + [Fraction(bi) * s])
    basis = [n + i for i in range(m)]
    # phase one: minimise the sum of artificials
    obj = [Fraction(0)] * (n + m + 1)
    for j in range(n + m + 1):
        if j < n or j == n + m:
            obj[j] = -sum((row[j] for row in T), Fraction(0))
    _run(T, obj, basis, n + m)
    if -obj[-1] > 0:
        y = [(1 - obj[n + i]) * signs[i] for i in range(m)]
        return LPResult(INFEASIBLE, farkas=y)
    # drive remaining artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                continue
            _pivot(T, obj, i, col)
            basis[i] = col
        keep.append(i)
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    # phase two
    obj = cost + [Fraction(0)]
    for i, bj in enumerate(basis):
        f = obj[bj]
        if f != 0:
            obj = [o - f * t for o, t in zip(obj, T[i])]
    status = _run(T, obj, basis, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        x[bj] = T[i][-1]
    return LPResult(OPTIMAL, x, -obj[-1])


def feasible(A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Feasibility of ``A x = b, x >= 0`` (zero objective)."""
    n = len(A[0]) if A else 0
    return solve([0] * n, A, b)
