"""Exact convex-geometry kernel: affine hulls, vertex enumeration, membership.

Vertex enumeration uses the double description method on the homogenised
cone over the polytope's affine hull, with integer ray arithmetic and the
combinatorial adjacency test.  Implicit equalities (inequalities tight on
the whole polytope) are found first with the exact simplex in :mod:`nbts.lp`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from . import lp
from .constraints import HPolytope, LinearConstraint
from .errors import (
    CapacityExceeded,
    DimensionMismatch,
    Empty,
    NotInPolytope,
    Unbounded,
)
from .linalg import dot, independent_rows, nullspace, primitive_integer, rank, solve_affine, solve_unique
from .scenario import to_fraction

MAX_AMBIENT_DIM = 256

Vector = tuple[Fraction, ...]


def _check_capacity(dim: int) -> None:
    if dim > MAX_AMBIENT_DIM:
        raise CapacityExceeded(f"ambient dimension {dim} exceeds the limit of {MAX_AMBIENT_DIM}")


@dataclass(frozen=True)
class VPolytope:
    """Deduplicated vertex list in lexicographic order."""

    ambient_dim: int
    vertices: tuple[Vector, ...]

    def __post_init__(self):
        verts = set()
        for v in self.vertices:
            vec = tuple(to_fraction(c) for c in v)
            if len(vec) != self.ambient_dim:
                raise DimensionMismatch(f"vertex has {len(vec)} coordinates, need {self.ambient_dim}")
            verts.add(vec)
        object.__setattr__(self, "vertices", tuple(sorted(verts)))

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def to_dict(self) -> dict:
        return {"dim": self.ambient_dim, "vertices": [[str(c) for c in v] for v in self.vertices]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "VPolytope":
        return cls(int(data["dim"]), tuple(tuple(v) for v in data["vertices"]))


@dataclass(frozen=True)
class MembershipCertificate:
    """Convex weights witnessing membership, or an exact separating inequality.

    A separator ``(coeffs, rhs)`` satisfies ``coeffs·point < rhs <= coeffs·v``
    for every vertex ``v`` (or every point of the H-polytope).
    """

    member: bool
    weights: dict[int, Fraction] | None = None
    separator: tuple[tuple[Fraction, ...], Fraction] | None = None
    vertices: VPolytope | None = field(default=None, repr=False)

    def __bool__(self) -> bool:
        return self.member

    def to_dict(self) -> dict:
        out: dict = {"member": self.member}
        if self.weights is not None:
            out["weights"] = {str(k): str(w) for k, w in sorted(self.weights.items())}
        if self.separator is not None:
            coeffs, rhs = self.separator
            out["separator"] = {"coeffs": [str(c) for c in coeffs], "rhs": str(rhs)}
        return out


# Affine hull -----------------------------------------------------------------


def _is_positivity(c: LinearConstraint) -> int | None:
    if c.rhs == 0 and len(c.coeffs) == 1 and c.coeffs[0][1] > 0:
        return c.coeffs[0][0]
    return None


class _HullLP:
    """Standard-form encoding of an H-polytope for slack maximisation."""

    def __init__(self, h: HPolytope):
        self.h = h
        dim = h.ambient_dim
        nonneg = {k for k in map(_is_positivity, h.inequalities) if k is not None}
        # column map: coordinate k -> list of (column, sign)
        self.cols: list[list[tuple[int, int]]] = []
        n = 0
        for k in range(dim):
            if k in nonneg:
                self.cols.append([(n, 1)])
                n += 1
            else:
                self.cols.append([(n, 1), (n + 1, -1)])
                n += 2
        self.n_coord_cols = n
        self.general = [i for i, c in enumerate(h.inequalities) if _is_positivity(c) is None]
        self.slack_col = {i: n + j for j, i in enumerate(self.general)}
        self.n = n + len(self.general)
        rows, rhs = [], []
        for c in h.equalities:
            rows.append(self._row(c))
            rhs.append(c.rhs)
        for i in self.general:
            c = h.inequalities[i]
            row = self._row(c)
            row[self.slack_col[i]] = Fraction(-1)
            rows.append(row)
            rhs.append(c.rhs)
        self.A, self.b = rows, rhs

    def _row(self, c: LinearConstraint) -> list[Fraction]:
        row = [Fraction(0)] * self.n
        for k, v in c.coeffs:
            for col, sign in self.cols[k]:
                row[col] += sign * v
        return row

    def point(self, sol: Sequence[Fraction]) -> list[Fraction]:
        return [sum((sign * sol[col] for col, sign in cols), Fraction(0)) for cols in self.cols]

    def maximise(self, c: LinearConstraint) -> lp.LPResult:
        row = self._row(c)
        return lp.solve([-v for v in row], self.A, self.b)


def implicit_equalities(h: HPolytope) -> list[int]:
    """Indices of inequalities that hold with equality on all of ``h``."""
    _check_capacity(h.ambient_dim)
    enc = _HullLP(h)
    first = lp.solve([0] * enc.n, enc.A, enc.b)
    if first.status == lp.INFEASIBLE:
        raise Empty("polytope is empty")
    undecided = set(range(len(h.inequalities)))
    implicit = []

    def discard_slack(x: list[Fraction]) -> None:
        for i in list(undecided):
            if h.inequalities[i].slack(x) > 0:
                undecided.discard(i)

    discard_slack(enc.point(first.x))
    for i in range(len(h.inequalities)):
        if i not in undecided:
            continue
        res = enc.maximise(h.inequalities[i])
        if res.status == lp.UNBOUNDED:
            undecided.discard(i)
            continue
        x = enc.point(res.x)
        if h.inequalities[i].slack(x) == 0:
            implicit.append(i)
            undecided.discard(i)
        discard_slack(x)
    return implicit


@dataclass(frozen=True)
class AffineHull:
    """x = origin + Σ z_j · basis[j] parametrises the polytope's affine hull."""

    origin: list[Fraction]
    basis: list[list[Fraction]]
    implicit: list[int]

    @property
    def dimension(self) -> int:
        return len(self.basis)


def affine_hull(h: HPolytope) -> AffineHull:
    implicit = implicit_equalities(h)
    rows = h.equality_rows() + [h.inequalities[i].dense(h.ambient_dim) for i in implicit]
    rhs = [c.rhs for c in h.equalities] + [h.inequalities[i].rhs for i in implicit]
    origin = solve_affine(rows, rhs, h.ambient_dim)
    if origin is None:
        raise Empty("equalities are inconsistent")
    return AffineHull(origin, nullspace(rows, h.ambient_dim), implicit)


def affine_dimension(h: HPolytope) -> int:
    """Dimension of the affine hull of the solution set of ``h``."""
    return affine_hull(h).dimension


# Vertex enumeration ----------------------------------------------------------


def _double_description(A: list[list[int]]) -> list[list[int]]:
    """Extreme rays of the pointed cone {y : A y >= 0}; rows processed in order."""
    d = len(A[0])
    start = independent_rows(A, d)
    if len(start) < d:
        raise Unbounded("cone has a lineality space; the polytope is unbounded")
    start = start[:d]
    B = [A[i] for i in start]
    # columns of B^{-1}: solve B r = e_j
    rays = []
    for j in range(d):
        e = [Fraction(int(i == j)) for i in range(d)]
        r = solve_unique(B, e, d)
        rays.append(primitive_integer(r))
    processed = list(start)
    zero_sets = []
    for r in rays:
        mask = 0
        for bit, i in enumerate(processed):
            if sum(a * v for a, v in zip(A[i], r)) == 0:
                mask |= 1 << bit
        zero_sets.append(mask)
    bit_of = {i: bit for bit, i in enumerate(processed)}
    for i in range(len(A)):
        if i in bit_of:
            continue
        row = A[i]
        bit = len(bit_of)
        bit_of[i] = bit
        vals = [sum(a * v for a, v in zip(row, r)) for r in rays]
        pos = [k for k, v in enumerate(vals) if v > 0]
        neg = [k for k, v in enumerate(vals) if v < 0]
        zer = [k for k, v in enumerate(vals) if v == 0]
        new_rays = [rays[k] for k in pos + zer]
        new_zero = [zero_sets[k] for k in pos] + [zero_sets[k] | (1 << bit) for k in zer]
        for p in pos:
            for q in neg:
                common = zero_sets[p] & zero_sets[q]
                if bin(common).count("1") < d - 2:
                    continue
                if any(
                    k != p and k != q and (zero_sets[k] & common) == common
                    for k in range(len(rays))
                ):
                    continue
                vp, vq = vals[p], vals[q]
                combo = [vp * a - vq * b for a, b in zip(rays[q], rays[p])]
                new_rays.append(primitive_integer([Fraction(c) for c in combo]))
                new_zero.append(common | (1 << bit))
        rays, zero_sets = new_rays, new_zero
    return rays


def enumerate_vertices(h: HPolytope) -> VPolytope:
    """All vertices of a bounded H-polytope, exact and in canonical order."""
    _check_capacity(h.ambient_dim)
    return _enumerate_cached(h)


@lru_cache(maxsize=64)
def _enumerate_cached(h: HPolytope) -> VPolytope:
    hull = affine_hull(h)
    k = hull.dimension
    x0 = hull.origin
    if k == 0:
        return VPolytope(h.ambient_dim, (tuple(x0),))
    implicit = set(hull.implicit)
    cone: list[list[int]] = [[1] + [0] * k]
    for i, c in enumerate(h.inequalities):
        if i in implicit:
            continue
        dense = c.dense(h.ambient_dim)
        row = [dot(dense, x0) - c.rhs] + [dot(dense, n) for n in hull.basis]
        if all(v == 0 for v in row):
            continue
        cone.append(primitive_integer(row))
    rays = _double_description(cone)
    verts = set()
    for r in rays:
        if r[0] == 0:
            raise Unbounded("recession direction found")
        t = Fraction(r[0])
        z = [Fraction(v) / t for v in r[1:]]
        x = tuple(
            x0[j] + sum((z[i] * hull.basis[i][j] for i in range(k) if z[i]), Fraction(0))
            for j in range(h.ambient_dim)
        )
        verts.add(x)
    return VPolytope(h.ambient_dim, tuple(verts))


# Membership ------------------------------------------------------------------


def _vertex_lp(v: VPolytope, point: Sequence[Fraction]) -> MembershipCertificate:
    n = len(v.vertices)
    dim = v.ambient_dim
    A = [[v.vertices[j][i] for j in range(n)] for i in range(dim)]
    A.append([Fraction(1)] * n)
    b = list(point) + [Fraction(1)]
    res = lp.feasible(A, b)
    if res.status == lp.OPTIMAL:
        weights = {j: w for j, w in enumerate(res.x) if w != 0}
        combo = [sum((w * v.vertices[j][i] for j, w in weights.items()), Fraction(0)) for i in range(dim)]
        assert combo == list(point) and sum(weights.values()) == 1
        return MembershipCertificate(True, weights=weights, vertices=v)
    y = res.farkas
    u, u0 = y[:dim], y[dim]
    coeffs = tuple(-c for c in u)
    assert dot(coeffs, point) < u0
    assert all(dot(coeffs, vert) >= u0 for vert in v.vertices)
    return MembershipCertificate(False, separator=(coeffs, u0), vertices=v)


def contains(h: HPolytope | None, v: VPolytope | None, point: Sequence) -> MembershipCertificate:
    """Decide membership of ``point`` with a certificate.

    With ``v`` given, membership in conv(v) is decided by an exact LP over
    convex weights.  Otherwise the H-constraints are evaluated exactly; a
    member's weight certificate then comes from the enumerated vertices.
    """
    pt = [to_fraction(c) for c in point]
    dim = v.ambient_dim if v is not None else h.ambient_dim
    if len(pt) != dim:
        raise DimensionMismatch(f"point has {len(pt)} coordinates, need {dim}")
    if v is not None:
        return _vertex_lp(v, pt)
    bad = h.violated(pt)
    if bad:
        c = bad[0]
        dense = c.dense(dim)
        lhs = c.lhs(pt)
        if c.relation == "eq" and lhs > c.rhs:
            return MembershipCertificate(False, separator=(tuple(-a for a in dense), -c.rhs))
        return MembershipCertificate(False, separator=(tuple(dense), c.rhs))
    return _vertex_lp(enumerate_vertices(h), pt)


def is_vertex(h: HPolytope, point: Sequence) -> bool:
    """True iff the constraints tight at ``point`` have full rank."""
    pt = [to_fraction(c) for c in point]
    if h.violated(pt):
        raise NotInPolytope("point violates the polytope's constraints")
    rows = h.equality_rows() + [c.dense(h.ambient_dim) for c in h.inequalities if c.slack(pt) == 0]
    return rank(rows, h.ambient_dim) == h.ambient_dim
