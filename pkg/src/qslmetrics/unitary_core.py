"""Validated unitary matrices, eigenphase extraction, and Haar sampling.

Angles use the principal branch (-pi, pi], with the convention that a phase
landing within a hair of -pi is reported as +pi so the branch cut has a
single owner.  Eigenphase lists are kept in a canonical order: magnitude
descending, ties broken by the signed value descending, which pairs them
deterministically with descending weight vectors downstream.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EigenSolverFailure,
    NonSquare,
    NotUnitary,
)

__all__ = [
    "ComplexMatrix",
    "UnitaryMatrix",
    "EigenphaseList",
    "DEFAULT_UNITARY_TOL_PER_DIM",
    "default_unitary_tol",
    "unitarity_defect",
    "validate_unitary",
    "wrap_angle",
    "wrap_angles",
    "eigenphases",
    "sort_phases",
    "principal_phases_batch",
    "relative_operator",
    "phase_shift",
    "compose",
    "haar_random_unitary",
    "haar_batch_from_rng",
]

TWO_PI = 2.0 * math.pi

# Default unitarity tolerance scales with dimension: tol = 1e-10 * n.
DEFAULT_UNITARY_TOL_PER_DIM = 1e-10

# Angles in (-pi, -pi + this] are folded onto +pi.
_BRANCH_CUT_SLACK = 1e-12


@dataclass(frozen=True)
class ComplexMatrix:
    """A finite square complex matrix with read-only storage."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=complex, copy=True)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise NonSquare(f"expected a square matrix, got shape {arr.shape}")
        if arr.shape[0] < 1:
            raise NonSquare("matrix must be at least 1x1")
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise NonSquare("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class UnitaryMatrix:
    """A matrix that passed the unitarity check, with its measured defect.

    Build these through :func:`validate_unitary`; constructing one by hand
    skips the check that gives the type its meaning.
    """

    matrix: ComplexMatrix
    unitarity_defect: float

    @property
    def entries(self) -> np.ndarray:
        return self.matrix.entries

    @property
    def n(self) -> int:
        return self.matrix.n


@dataclass(frozen=True)
class EigenphaseList:
    """Eigenphases on the principal branch, canonically sorted.

    The constructor canonicalizes: every angle is wrapped to (-pi, pi] and
    the list is sorted by |theta| descending with ties broken by the signed
    value descending.
    """

    phases: tuple[float, ...]

    def __post_init__(self):
        arr = wrap_angles(np.asarray(self.phases, dtype=float))
        arr = sort_phases(arr)
        object.__setattr__(self, "phases", tuple(float(t) for t in arr))

    @property
    def n(self) -> int:
        return len(self.phases)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.phases, dtype=float)


def default_unitary_tol(n: int) -> float:
    return DEFAULT_UNITARY_TOL_PER_DIM * n


def unitarity_defect(entries: np.ndarray) -> float:
    """Frobenius norm of (M* M - I)."""
    n = entries.shape[0]
    return float(np.linalg.norm(entries.conj().T @ entries - np.eye(n)))


def validate_unitary(matrix, tol: float | None = None) -> UnitaryMatrix:
    """Check unitarity within ``tol`` (default 1e-10 * n) and wrap the matrix.

    Raises NonSquare for malformed input and NotUnitary (carrying the
    measured defect) when the check fails.
    """
    cm = matrix if isinstance(matrix, ComplexMatrix) else ComplexMatrix(matrix)
    if tol is None:
        tol = default_unitary_tol(cm.n)
    defect = unitarity_defect(cm.entries)
    if not (defect <= tol):
        raise NotUnitary(defect, tol)
    return UnitaryMatrix(cm, defect)


def wrap_angle(x: float) -> float:
    """Reduce an angle to the principal interval (-pi, pi].

    The floor-based reduction lands in [-pi, pi); anything within 1e-12 of
    the bottom end is then reported as +pi, so -pi itself and near-miss
    rounding both map to the branch value +pi.
    """
    y = x - TWO_PI * math.floor((x + math.pi) / TWO_PI)
    if y <= -math.pi + _BRANCH_CUT_SLACK:
        y = math.pi
    return y


def wrap_angles(x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`wrap_angle`."""
    x = np.asarray(x, dtype=float)
    y = x - TWO_PI * np.floor((x + math.pi) / TWO_PI)
    return np.where(y <= -math.pi + _BRANCH_CUT_SLACK, math.pi, y)


def sort_phases(theta: np.ndarray) -> np.ndarray:
    """Canonical order: |theta| descending, ties by signed value descending."""
    theta = np.asarray(theta, dtype=float)
    order = np.lexsort((-theta, -np.abs(theta)))
    return theta[order]


def _phases_from_eigenvalues(lam: np.ndarray) -> np.ndarray:
    moduli = np.abs(lam)
    if np.any(moduli < 0.5):
        raise EigenSolverFailure(
            "eigenvalue modulus collapsed far from the unit circle; solver output unusable"
        )
    lam = lam / moduli  # project radial noise away before taking arguments
    theta = np.angle(lam)
    return np.where(theta <= -math.pi + _BRANCH_CUT_SLACK, math.pi, theta)


def eigenphases(u: UnitaryMatrix) -> EigenphaseList:
    """Principal-branch eigenphases of a validated unitary, canonically sorted."""
    try:
        lam = np.linalg.eigvals(u.entries)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverFailure(f"eigenvalue solver failed: {exc}") from exc
    return EigenphaseList(tuple(_phases_from_eigenvalues(lam)))


def principal_phases_batch(mats: np.ndarray) -> np.ndarray:
    """Eigenphases for a stack of (approximately) unitary matrices.

    Input shape (..., n, n); output shape (..., n), unsorted.  Used by the
    fuzz campaigns where per-matrix object wrapping would dominate runtime.
    """
    try:
        lam = np.linalg.eigvals(mats)
    except np.linalg.LinAlgError as exc:
        raise EigenSolverFailure(f"batched eigenvalue solver failed: {exc}") from exc
    moduli = np.abs(lam)
    if np.any(moduli < 0.5):
        raise EigenSolverFailure(
            "eigenvalue modulus collapsed far from the unit circle in a batch"
        )
    theta = np.angle(lam / moduli)
    return np.where(theta <= -math.pi + _BRANCH_CUT_SLACK, math.pi, theta)


def _combined_tol(*operands: UnitaryMatrix) -> float:
    n = operands[0].n
    return default_unitary_tol(n) + sum(op.unitarity_defect for op in operands) + 1e-12 * n


def relative_operator(u: UnitaryMatrix, v: UnitaryMatrix) -> UnitaryMatrix:
    """U V^{-1}, revalidated.  V^{-1} is V* since both inputs are unitary."""
    if u.n != v.n:
        raise DimensionMismatch(f"operands have dimensions {u.n} and {v.n}")
    product = u.entries @ v.entries.conj().T
    return validate_unitary(product, tol=_combined_tol(u, v))


def compose(u: UnitaryMatrix, v: UnitaryMatrix) -> UnitaryMatrix:
    """Matrix product U V, staying inside the validated wrapper."""
    if u.n != v.n:
        raise DimensionMismatch(f"operands have dimensions {u.n} and {v.n}")
    return validate_unitary(u.entries @ v.entries, tol=_combined_tol(u, v))


def phase_shift(u: UnitaryMatrix, x: float) -> UnitaryMatrix:
    """Multiply by the global phase e^{ix}."""
    if not math.isfinite(x):
        raise NonSquare("phase must be finite")
    shifted = u.entries * complex(math.cos(x), math.sin(x))
    return validate_unitary(shifted, tol=_combined_tol(u))


def haar_batch_from_rng(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """``count`` Haar-distributed n x n unitaries drawn from ``rng``, stacked.

    Complex Ginibre + QR, with the R diagonal's phases pushed back into Q so
    the distribution is exactly Haar rather than QR-convention dependent.
    """
    z = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    q = q * (diag / np.abs(diag))[..., None, :]
    return q


def haar_random_unitary(n: int, seed: int) -> UnitaryMatrix:
    """A single Haar-distributed unitary from a fresh generator seeded with ``seed``."""
    if n < 1:
        raise NonSquare("dimension must be at least 1")
    rng = np.random.default_rng(seed)
    q = haar_batch_from_rng(rng, n, 1)[0]
    return validate_unitary(q)
