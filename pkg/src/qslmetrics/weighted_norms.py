"""Weighted lp seminorms and their permutation-symmetric envelope.

The symmetric norm pairs the weights, sorted descending, with the absolute
values of the vector, also sorted descending.  By the rearrangement
inequality this equals the maximum of the plain weighted lp seminorm over
all permutations of the weights, which is what makes it a symmetric gauge
function for p >= 1.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, OutOfRange

__all__ = [
    "PExponent",
    "WeightVector",
    "as_exponent",
    "as_weights",
    "lp_seminorm",
    "symmetric_lp_norm",
    "sorted_abs_desc",
    "symmetric_norm_sorted",
    "paired_power_sum",
]


@dataclass(frozen=True)
class PExponent:
    """Exponent of the weighted lp family.

    Any finite p > 0 is accepted.  Norm axioms (and hence the triangle
    inequality downstream) are only guaranteed for p >= 1; smaller exponents
    are allowed so the conjectured sub-unit regime can be exercised.
    """

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not math.isfinite(p) or p <= 0.0:
            raise OutOfRange(f"exponent must be a finite positive real, got {self.p!r}")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class WeightVector:
    """Nonnegative weights, not all zero, with a cached descending rearrangement."""

    mu: tuple[float, ...]
    mu_desc: tuple[float, ...] = None  # type: ignore[assignment]  # derived in __post_init__

    def __post_init__(self):
        mu = tuple(float(m) for m in self.mu)
        if len(mu) == 0:
            raise OutOfRange("weight vector must have at least one entry")
        if not all(math.isfinite(m) for m in mu):
            raise OutOfRange("weights must be finite")
        if any(m < 0.0 for m in mu):
            raise OutOfRange("weights must be nonnegative")
        if not any(m > 0.0 for m in mu):
            raise OutOfRange("at least one weight must be positive")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "mu_desc", tuple(sorted(mu, reverse=True)))

    @property
    def n(self) -> int:
        return len(self.mu)


def as_exponent(p) -> PExponent:
    return p if isinstance(p, PExponent) else PExponent(float(p))


def as_weights(mu) -> WeightVector:
    return mu if isinstance(mu, WeightVector) else WeightVector(tuple(mu))


def sorted_abs_desc(values: np.ndarray) -> np.ndarray:
    """Absolute values sorted descending along the last axis (batch friendly)."""
    return np.sort(np.abs(np.asarray(values, dtype=float)), axis=-1)[..., ::-1]


def paired_power_sum(abs_desc: np.ndarray, mu_desc: np.ndarray, p: float) -> np.ndarray:
    """sum_j mu_desc[j] * abs_desc[..., j]**p along the last axis, no root.

    Both inputs must already be sorted descending; ``mu_desc`` may carry
    matching batch axes or be a single vector.
    """
    return np.sum(np.asarray(mu_desc, dtype=float) * np.asarray(abs_desc, dtype=float) ** p, axis=-1)


def symmetric_norm_sorted(abs_desc: np.ndarray, mu_desc: np.ndarray, p: float) -> np.ndarray:
    """Batch kernel: (sum_j mu_desc[j] * abs_desc[..., j]**p)**(1/p).

    Scales by the leading entry before taking powers so large p cannot
    overflow; the leading entry is the max since the input is sorted.
    """
    abs_desc = np.asarray(abs_desc, dtype=float)
    mu_desc = np.asarray(mu_desc, dtype=float)
    top = abs_desc[..., 0]
    safe_top = np.where(top > 0.0, top, 1.0)
    scaled = abs_desc / safe_top[..., None]
    total = np.sum(mu_desc * scaled ** p, axis=-1)
    return np.where(top > 0.0, safe_top * total ** (1.0 / p), 0.0)


def _check_pair(v, weights: WeightVector):
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1:
        raise LengthMismatch(f"expected a flat vector, got shape {arr.shape}")
    if arr.shape[0] != weights.n:
        raise LengthMismatch(
            f"vector has {arr.shape[0]} entries but there are {weights.n} weights"
        )
    if not np.all(np.isfinite(arr)):
        raise OutOfRange("vector entries must be finite")
    return arr


def lp_seminorm(v, mu, p) -> float:
    """Weighted lp seminorm with the weights applied in the given order."""
    weights = as_weights(mu)
    exponent = as_exponent(p)
    arr = np.abs(_check_pair(v, weights))
    top = float(arr.max(initial=0.0))
    if top == 0.0:
        return 0.0
    total = float(np.sum(np.asarray(weights.mu) * (arr / top) ** exponent.p))
    return top * total ** (1.0 / exponent.p)


def symmetric_lp_norm(v, mu, p) -> float:
    """Permutation-maximized weighted lp norm: descending weights meet descending magnitudes."""
    weights = as_weights(mu)
    exponent = as_exponent(p)
    arr = _check_pair(v, weights)
    return float(symmetric_norm_sorted(sorted_abs_desc(arr), np.asarray(weights.mu_desc), exponent.p))
