"""Pre- and post-selected (two-time) state calculus."""

from .analysis import (
    LinearityReport,
    StructureReport,
    WitnessReport,
    is_linear_two_time,
    nbts_witness_single,
    probability,
    structural_form_check,
)
from .bridge import (
    BehaviorExtraction,
    Strategy,
    classicality_deviation,
    extract_behavior,
    input_dependence,
    nbts_deviation,
    random_linear_state,
    random_strategy,
    rationalize,
    strategy_from_dict,
)
from .config import get_tolerance, set_tolerance
from .processes import (
    Measurement,
    basis_vectors,
    channel_from_kraus,
    discard_randomize,
    effect,
    identity_channel,
    identity_vector,
    is_trace_preserving,
    measure_prepare,
    projective_instrument,
    pure_effect,
    pure_state,
    state,
    throw_away_replace,
    tomographic_unitaries,
    unitary_channel,
)
from .tensor import LabeledTensor, WireIndex, bullet

__all__ = [name for name in dir() if not name.startswith("_")]
