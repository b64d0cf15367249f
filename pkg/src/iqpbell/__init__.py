"""Exact IQP circuit simulation and nonlocality analysis."""
__version__ = "0.1.0"

from .errors import (
    CircuitParseError,
    ImpossibleEventError,
    InputShapeError,
    IQPBellError,
    QubitCountMismatch,
    ResourceError,
)
from .phasepoly import (
    Angle,
    DiagonalUnitary,
    IQPBellTest,
    IQPCircuit,
    PhaseTerm,
    compose,
    cz,
    phase_of,
    r_gate,
    realize,
    restrict,
)
from .circuit_io import load_circuit, parse_circuit, save_circuit, serialize_circuit
from .simulator import (
    CorrelatorTable,
    OutcomeDistribution,
    correlator,
    correlator_table,
    fwht,
    postselect,
    run_iqp,
    sample,
)
from .gadgets import ghz_bell_test, ghz_gadget, hadamard_gadget_apply
from .lhv import lhv_bound_full_correlation, lhv_bound_ghz, lhv_bound_lifted
from .nonlocality import (
    cosine_decomposition,
    ghz_bell_value,
    lifted_bell_value,
    marginal_decomposition,
    pairing_identity_check,
    wwzb,
)
