"""Mixed-state entanglement monotones of small spin rings via convex roofs.

The package computes convex-roof extensions of pure-state entanglement
measures (three-tangle, entanglement entropy) by conjugate-gradient
descent over unitary decomposition parametrizations, and applies them to
thermal states of a three-qubit anisotropic Heisenberg ring in local
magnetic fields.
"""

from .convexroof import (
    ConvexRoofResult,
    OptimizerOptions,
    PureDecomposition,
    RhoFactor,
    StiefelPoint,
    decomposition_from_stiefel,
    factor_density_matrix,
    gradient,
    line_search,
    minimize,
    objective,
    random_stiefel,
)
from .linalg import eigh, expm_skew, kron, partial_trace
from .measures import (
    THREE_TANGLE,
    PureMeasure,
    concurrence_mixed,
    entanglement_entropy,
    entropy_measure,
    hyperdeterminant_tangle,
    tangle_pure,
)
from .oracles import ghz_w_mixture_tangle, isotropic_eof, oracle_suite
from .spinring import (
    RADIAL,
    UNIFORM_X,
    UNIFORM_Z,
    FieldKind,
    SpinRingParams,
    build_hamiltonian,
    classical_barrier,
    classical_energy,
    ghz_overlap_leading_order,
    ghz_plus,
    ghz_minus,
    ground_tangle_closed_form,
    spectrum,
    thermal_state,
    w_conditions,
    w_state,
    w_state_flipped,
)

__version__ = "0.1.0"

__all__ = [
    "ConvexRoofResult",
    "FieldKind",
    "OptimizerOptions",
    "PureDecomposition",
    "PureMeasure",
    "RADIAL",
    "RhoFactor",
    "SpinRingParams",
    "StiefelPoint",
    "THREE_TANGLE",
    "UNIFORM_X",
    "UNIFORM_Z",
    "build_hamiltonian",
    "classical_barrier",
    "classical_energy",
    "concurrence_mixed",
    "decomposition_from_stiefel",
    "eigh",
    "entanglement_entropy",
    "entropy_measure",
    "expm_skew",
    "factor_density_matrix",
    "ghz_minus",
    "ghz_overlap_leading_order",
    "ghz_plus",
    "ghz_w_mixture_tangle",
    "gradient",
    "ground_tangle_closed_form",
    "hyperdeterminant_tangle",
    "isotropic_eof",
    "kron",
    "line_search",
    "minimize",
    "objective",
    "oracle_suite",
    "partial_trace",
    "random_stiefel",
    "spectrum",
    "tangle_pure",
    "thermal_state",
    "w_conditions",
    "w_state",
    "w_state_flipped",
]
