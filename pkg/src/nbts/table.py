"""Dimension and vertex-count summary of the six (2,2,2,2) polytopes."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .catalog import catalog_for
from .constraints import build_polytope
from .polytope import affine_dimension, enumerate_vertices
from .scenario import Scenario, TimingRegime

# (label, regime, classical, expected dimension, expected vertex count)
EXPECTED = (
    ("NBTS indefinite", "indefinite", False, 8, 24),
    ("Classical indefinite", "indefinite", True, 7, 12),
    ("NBTS parallel", "parallel", False, 6, 18),
    ("Classical parallel", "parallel", True, 3, 4),
    ("NBTS sequential A->B", "seq:AB", False, 7, 20),
    ("Classical sequential A->B", "seq:AB", True, 5, 8),
)


@dataclass(frozen=True)
class TableRow:
    label: str
    regime: str
    classical: bool
    dimension: int
    vertices: int
    expected_dimension: int
    expected_vertices: int
    catalog_match: bool | None
    seconds: float

    @property
    def ok(self) -> bool:
        return self.dimension == self.expected_dimension and self.vertices == self.expected_vertices

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "regime": self.regime,
            "classical": self.classical,
            "dimension": self.dimension,
            "vertices": self.vertices,
            "expected_dimension": self.expected_dimension,
            "expected_vertices": self.expected_vertices,
            "catalog_match": self.catalog_match,
            "status": "PASS" if self.ok else "FAIL",
        }


def reproduce(s: Scenario | None = None) -> list[TableRow]:
    """Compute every row; the catalog comparison is made only at (2,2,2,2)."""
    s = Scenario.bipartite(2, 2, 2, 2) if s is None else s
    rows = []
    for label, regime_name, classical, dim, nv in EXPECTED:
        t0 = time.perf_counter()
        regime = TimingRegime.parse(regime_name)
        h = build_polytope(s, regime, classical)
        verts = enumerate_vertices(h)
        match = None
        if s == Scenario.bipartite(2, 2, 2, 2):
            match = set(verts.vertices) == {b.values for b in catalog_for(regime, classical)}
        rows.append(TableRow(label, regime_name, classical, affine_dimension(h), len(verts.vertices),
                             dim, nv, match, time.perf_counter() - t0))
    return rows


def format_rows(rows: list[TableRow]) -> str:
    head = f"{'polytope':<28}{'dim':>5}{'exp':>5}{'verts':>7}{'exp':>5}  status"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.label:<28}{r.dimension:>5}{r.expected_dimension:>5}{r.vertices:>7}"
                     f"{r.expected_vertices:>5}  {'PASS' if r.ok else 'FAIL'}")
    return "\n".join(lines)
