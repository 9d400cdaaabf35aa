"""MPS circuit simulation, Shor factorization, and scalability benchmarks."""

from .circuit import (
    Circuit,
    Gate,
    ORDERINGS,
    RegisterLayout,
    inverse_qft_circuit,
    qft_circuit,
    reorder_registers,
    shor_order_circuit,
)
from .mps import (
    GateStats,
    MpsState,
    SimulationTimeout,
    TruncationPolicy,
    TruncationError,
    amplitude,
    apply_1q,
    apply_2q,
    bond_entropy,
    init_state,
    run_circuit,
    sample,
    schmidt_number,
    to_statevector,
)
from .numthy import (
    ContinuedFractionExpansion,
    SemiprimeSpec,
    breakable_bits,
    cf_expand,
    extract_order,
    generate_semiprimes,
    multiplicative_order,
    preselect_base,
)
from .pipeline import FactorizationOutcome, RunConfig, factor

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "ContinuedFractionExpansion",
    "FactorizationOutcome",
    "Gate",
    "GateStats",
    "MpsState",
    "ORDERINGS",
    "RegisterLayout",
    "RunConfig",
    "SemiprimeSpec",
    "SimulationTimeout",
    "TruncationError",
    "TruncationPolicy",
    "amplitude",
    "apply_1q",
    "apply_2q",
    "bond_entropy",
    "breakable_bits",
    "cf_expand",
    "extract_order",
    "factor",
    "generate_semiprimes",
    "init_state",
    "inverse_qft_circuit",
    "multiplicative_order",
    "preselect_base",
    "qft_circuit",
    "reorder_registers",
    "run_circuit",
    "sample",
    "schmidt_number",
    "shor_order_circuit",
    "to_statevector",
]
