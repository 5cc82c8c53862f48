"""Request and response models for the HTTP service.

Matrices travel as separate real/imaginary row-major grids under their
dimension; spectral states as parallel energy/weight lists.  These mirror
the on-disk JSON formats the CLI reads, so payloads round-trip unchanged.
"""

from typing import Literal

from pydantic import BaseModel, Field, model_validator

__all__ = [
    "MatrixPayload",
    "StatePayload",
    "PhasesRequest",
    "PhasesResponse",
    "MetricRequest",
    "MatrixPair",
    "MetricBatchRequest",
    "MetricResponse",
    "MetricBatchResponse",
    "BoundRequest",
    "BoundResponse",
    "ConstantsResponse",
    "TableRowPayload",
    "Table1Response",
    "FuzzRequest",
    "ViolationPayload",
    "FuzzResponse",
]


class MatrixPayload(BaseModel):
    """Square complex matrix: {"n": dim, "re": rows, "im": rows}."""

    n: int = Field(ge=1)
    re: list[list[float]]
    im: list[list[float]]

    @model_validator(mode="after")
    def _check_shape(self):
        for name, grid in (("re", self.re), ("im", self.im)):
            if len(grid) != self.n or any(len(row) != self.n for row in grid):
                raise ValueError(f"'{name}' must be an {self.n} x {self.n} grid")
        return self


class StatePayload(BaseModel):
    """Spectral state: parallel lists of energies and occupation weights."""

    energies: list[float]
    weights: list[float]


class PhasesRequest(BaseModel):
    matrix: MatrixPayload
    tol: float | None = Field(default=None, gt=0.0)


class PhasesResponse(BaseModel):
    n: int
    phases: list[float]
    unitarity_defect: float


class MetricRequest(BaseModel):
    u: MatrixPayload
    v: MatrixPayload
    mu: list[float]
    p: float
    pseudo: bool = False


class MatrixPair(BaseModel):
    u: MatrixPayload
    v: MatrixPayload


class MetricBatchRequest(BaseModel):
    pairs: list[MatrixPair]
    mu: list[float]
    p: float
    pseudo: bool = False


class MetricResponse(BaseModel):
    value: float
    argmin_x: float | None = None
    candidates_examined: int | None = None
    warnings: list[str] = []


class MetricBatchResponse(BaseModel):
    results: list[MetricResponse]


class BoundRequest(BaseModel):
    state: StatePayload
    p: float
    epsilon: float
    hbar: float = 1.0


class BoundResponse(BaseModel):
    tau_c1: float
    tau_c2: float
    moment_ep: float
    dpe: float
    optimal_reference: float
    epsilon: float
    phase_angles: list[float]
    p: float
    hbar: float
    tight: bool
    warnings: list[str] = []


class ConstantsResponse(BaseModel):
    p: float
    x_c: float
    a_p: float


class TableRowPayload(BaseModel):
    state_label: str
    tau_exact: float
    ratios: dict[str, float]


class Table1Response(BaseModel):
    p_values: list[float]
    rows: list[TableRowPayload]
    reference: list[TableRowPayload]
    max_abs_deviation: float
    large_n: int
    finite_comb_ratios: dict[str, float]
    finite_comb_max_gap: float


class FuzzRequest(BaseModel):
    mode: Literal["triangle", "pseudo-oracle", "generator"]
    n: int = Field(ge=1)
    p: float
    mu: list[float] | None = None
    trials: int = Field(default=1000, ge=1)
    seed: int = 0
    k_range: int = Field(default=2, ge=1)
    grid_points: int = Field(default=100_000, ge=3)


class ViolationPayload(BaseModel):
    trial: int
    seed: int
    slack: float
    detail: str = ""


class FuzzResponse(BaseModel):
    mode: str
    trials: int
    dimension: int
    p: float
    mu: list[float] | None = None
    seed: int
    tolerance: float
    max_slack: float
    violation_count: int = 0
    violations: list[ViolationPayload] = []
    warnings: list[str] = []
