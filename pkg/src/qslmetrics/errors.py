"""Exception hierarchy shared by the library, the service, and the CLI.

Every error carries a short machine-readable ``code`` so the HTTP layer can
serialize it and the CLI can map it onto an exit code without string matching.
"""

__all__ = [
    "QslMetricsError",
    "NonSquare",
    "NotUnitary",
    "DimensionMismatch",
    "LengthMismatch",
    "EigenSolverFailure",
    "OutOfRange",
    "DegenerateState",
    "InvalidP",
    "NeverAttained",
]


class QslMetricsError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"


class NonSquare(QslMetricsError):
    """Matrix input is malformed: not two-dimensional, not square, or not finite."""

    code = "non_square"


class NotUnitary(QslMetricsError):
    """Matrix failed the unitarity check; carries the measured defect."""

    code = "not_unitary"

    def __init__(self, defect: float, tol: float):
        self.defect = float(defect)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not unitary: defect {self.defect:.6e} exceeds tolerance {self.tol:.6e}"
        )


class DimensionMismatch(QslMetricsError):
    """Two operands live in different dimensions (matrix vs matrix, or weights vs matrix)."""

    code = "dimension_mismatch"


class LengthMismatch(QslMetricsError):
    """Two vectors that must be paired elementwise have different lengths."""

    code = "length_mismatch"


class EigenSolverFailure(QslMetricsError):
    """The eigenvalue backend did not converge or returned garbage for a unitary input."""

    code = "eigen_solver_failure"


class OutOfRange(QslMetricsError):
    """A scalar argument sits outside its documented domain."""

    code = "out_of_range"


class DegenerateState(QslMetricsError):
    """The spectral state cannot support the requested bound (zero moment or zero spread)."""

    code = "degenerate_state"


class InvalidP(QslMetricsError):
    """No normalized saturating state exists for this exponent/fidelity combination."""

    code = "invalid_p"


class NeverAttained(QslMetricsError):
    """The fidelity never reaches the target on the scanned horizon.

    ``scanned_min`` is the smallest fidelity seen and ``horizon`` the time up to
    which the evolution was examined, so callers can report how close the state
    came to the target.
    """

    code = "never_attained"

    def __init__(self, message: str, scanned_min: float | None = None, horizon: float | None = None):
        super().__init__(message)
        self.scanned_min = scanned_min
        self.horizon = horizon
