"""Weighted-lp distances on the unitary group and quantum-speed-limit bounds.

The library computes the family of metrics (and their global-phase
pseudo-metric quotients) induced on n x n unitaries by symmetric weighted
lp norms of eigenphases, together with the matching evolution-time lower
bounds for pure states, the three-level states saturating them, and the
randomized campaigns that cross-check both against brute-force oracles.
"""

from .errors import (
    DegenerateState,
    DimensionMismatch,
    EigenSolverFailure,
    InvalidP,
    LengthMismatch,
    NeverAttained,
    NonSquare,
    NotUnitary,
    OutOfRange,
    QslMetricsError,
)
from .experiments import (
    FuzzReport,
    TableRow,
    conjecture_fuzz,
    generator_consistency,
    rearrangement_consistency,
    reproduce_table1,
    table1_reference,
)
from .qsl_bounds import (
    QslConstants,
    QslReport,
    SpectralState,
    amplitude_constant,
    critical_angle,
    dpe,
    fidelity_at,
    first_passage_time,
    magic_state,
    moment_ep,
    tau_c1,
    tau_c2,
)
from .un_metrics import (
    MetricSpec,
    PhaseMinResult,
    degree_of_noncommutativity,
    metric_d,
    pseudometric_d,
    pseudometric_grid_oracle,
)
from .unitary_core import (
    ComplexMatrix,
    EigenphaseList,
    UnitaryMatrix,
    eigenphases,
    haar_random_unitary,
    phase_shift,
    relative_operator,
    validate_unitary,
    wrap_angle,
)
from .weighted_norms import (
    PExponent,
    WeightVector,
    lp_seminorm,
    symmetric_lp_norm,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "QslMetricsError", "NonSquare", "NotUnitary", "DimensionMismatch",
    "LengthMismatch", "EigenSolverFailure", "OutOfRange", "DegenerateState",
    "InvalidP", "NeverAttained",
    # norms
    "PExponent", "WeightVector", "lp_seminorm", "symmetric_lp_norm",
    # unitaries
    "ComplexMatrix", "UnitaryMatrix", "EigenphaseList", "validate_unitary",
    "eigenphases", "wrap_angle", "relative_operator", "phase_shift",
    "haar_random_unitary",
    # metrics
    "MetricSpec", "PhaseMinResult", "metric_d", "pseudometric_d",
    "pseudometric_grid_oracle", "degree_of_noncommutativity",
    # bounds
    "SpectralState", "QslConstants", "QslReport", "critical_angle",
    "amplitude_constant", "moment_ep", "dpe", "tau_c1", "tau_c2",
    "magic_state", "fidelity_at", "first_passage_time",
    # experiments
    "TableRow", "FuzzReport", "reproduce_table1", "table1_reference",
    "conjecture_fuzz", "generator_consistency", "rearrangement_consistency",
]
