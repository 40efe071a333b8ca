"""Exact no-backwards-in-time-signalling (NBTS) and classical correlation polytopes,
their constructive classical decomposition, and a two-time state calculus."""

from .catalog import catalog_for, generate, is_gyni_vertex
from .constraints import (
    HPolytope,
    LinearConstraint,
    build_polytope,
    classicality_constraints,
    count_independent_classicality,
    nbts_constraints,
    normalization_constraints,
    positivity_constraints,
)
from .decompose import ClassicalVertex, ConvexDecomposition, decompose, recompose
from .errors import NBTSError, PreconditionFailed
from .polytope import VPolytope, affine_dimension, contains, enumerate_vertices, is_vertex
from .scenario import (
    Behavior,
    Scenario,
    TimingRegime,
    check_classicality_equalities,
    check_nbts,
    marginal,
    mix,
)

__version__ = "0.1.0"
