"""Evolution-time lower bounds for pure states under a fixed Hamiltonian.

The chain is: a pointwise inequality cos x >= 1 - A_p|x|^p (with optimal
constant A_p attained at the critical angle x_c) turns the p-th absolute
energy moment, or its reference-optimized version D_pE, into a lower bound
on the time needed for the survival probability to drop to a target
fidelity.  A three-level "magic" state saturates both bounds whenever
0 < p <= pi/2.

hbar is a configuration constant defaulting to 1 (natural units); every
time-valued function accepts it as a keyword so unit conventions stay at the
call site.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateState,
    InvalidP,
    LengthMismatch,
    NeverAttained,
    OutOfRange,
)
from .scalar_search import bisect_root, golden_min
from .weighted_norms import as_exponent

__all__ = [
    "SpectralState",
    "QslConstants",
    "QslReport",
    "TIGHT_P_MAX",
    "critical_angle",
    "amplitude_constant",
    "moment_ep",
    "dpe",
    "tau_c1",
    "tau_c2",
    "magic_state",
    "fidelity_at",
    "first_passage_time",
]

# Bounds are saturable (by the three-level state below) only up to this exponent.
TIGHT_P_MAX = math.pi / 2.0

# For p within this band of 2 the critical angle collapses to 0 and the
# amplitude constant to its Taylor limit 1/2, avoiding a 0/0 evaluation.
_NEAR_TWO_BAND = 1e-6

_WEIGHT_SUM_TOL = 1e-12

# first_passage_time scan parameters.  The step is pi*hbar/(64*max|E|); a
# sampled local minimum of (fidelity - target) at or below _TOUCH_DETECT is
# refined, since the curvature bound caps how far the true minimum can dip
# between samples (pi^2/8192 ~ 0.0012 in fidelity units).
_TOUCH_DETECT = 2e-3
_TOUCH_ACCEPT = 1e-12
_SCAN_CHUNK = 32768
_MAX_SCAN_STEPS = 1 << 22


@dataclass(frozen=True)
class SpectralState:
    """Energy eigenvalues with their occupation probabilities.

    Weights must be nonnegative and sum to 1 within 1e-12.
    """

    energies: tuple[float, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        energies = tuple(float(e) for e in self.energies)
        weights = tuple(float(w) for w in self.weights)
        if len(energies) != len(weights):
            raise LengthMismatch(
                f"{len(energies)} energies but {len(weights)} weights"
            )
        if len(energies) == 0:
            raise OutOfRange("state must have at least one level")
        if not all(math.isfinite(e) for e in energies):
            raise OutOfRange("energies must be finite")
        if not all(math.isfinite(w) and w >= 0.0 for w in weights):
            raise OutOfRange("weights must be finite and nonnegative")
        if abs(sum(weights) - 1.0) > _WEIGHT_SUM_TOL:
            raise OutOfRange(f"weights sum to {sum(weights)}, expected 1 within {_WEIGHT_SUM_TOL}")
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "weights", weights)

    @property
    def n(self) -> int:
        return len(self.energies)

    def energy_array(self) -> np.ndarray:
        return np.asarray(self.energies, dtype=float)

    def weight_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


@dataclass(frozen=True)
class QslConstants:
    """The exponent with its critical angle and optimal amplitude constant."""

    p: float
    x_c: float
    a_p: float


@dataclass(frozen=True)
class QslReport:
    """Both bounds plus every intermediate quantity, for one (state, p, epsilon)."""

    tau_c1: float
    tau_c2: float
    moment_ep: float
    dpe: float
    optimal_reference: float
    epsilon: float
    phase_angles: tuple[float, ...]
    p: float
    hbar: float
    tight: bool

    def to_dict(self) -> dict:
        return {
            "tau_c1": self.tau_c1,
            "tau_c2": self.tau_c2,
            "moment_ep": self.moment_ep,
            "dpe": self.dpe,
            "optimal_reference": self.optimal_reference,
            "epsilon": self.epsilon,
            "phase_angles": list(self.phase_angles),
            "p": self.p,
            "hbar": self.hbar,
            "tight": self.tight,
        }


def _check_epsilon(epsilon: float, *, allow_one: bool = True) -> float:
    epsilon = float(epsilon)
    hi_ok = epsilon <= 1.0 if allow_one else epsilon < 1.0
    if not (math.isfinite(epsilon) and 0.0 <= epsilon and hi_ok):
        raise OutOfRange(f"target fidelity must lie in [0, 1{']' if allow_one else ')'}, got {epsilon}")
    return epsilon


def _check_hbar(hbar: float) -> float:
    hbar = float(hbar)
    if not (math.isfinite(hbar) and hbar > 0.0):
        raise OutOfRange(f"hbar must be positive, got {hbar}")
    return hbar


def critical_angle(p) -> float:
    """Root in (0, pi) of p*sin(x/2) - x*cos(x/2) = 0; defined as 0 at p = 2.

    This is the tan-free restatement of p*tan(x/2) = x, which stays finite at
    the upper endpoint pi.  Exponents within 1e-6 of 2 return 0 directly
    (the root is already below 2.5e-3 there and feeds a 0/0-prone ratio).
    """
    p = as_exponent(p).p
    if p > 2.0:
        raise OutOfRange(f"critical angle is defined for 0 < p <= 2, got {p}")
    if p >= 2.0 - _NEAR_TWO_BAND:
        return 0.0

    def g(x: float) -> float:
        return p * math.sin(0.5 * x) - x * math.cos(0.5 * x)

    # g(0+) < 0 for p < 2 and g(pi) = p > 0, so the bracket is guaranteed.
    return bisect_root(g, 1e-9, math.pi, xtol=1e-13)


def amplitude_constant(p) -> QslConstants:
    """Optimal constant in cos x >= 1 - A_p|x|^p, with its maximizing angle.

    For p >= 2 the supremum argument degenerates (x_c = 0) and the constant
    is the p = 2 Taylor value 1/2, which is also the convention used by the
    bounds for p > 2.  The 2*sin^2(x/2) form avoids cancellation in 1 - cos x
    for small critical angles.
    """
    p = as_exponent(p).p
    if p >= 2.0 - _NEAR_TWO_BAND:
        return QslConstants(p=p, x_c=0.0, a_p=0.5)
    x_c = critical_angle(p)
    half_sin = math.sin(0.5 * x_c)
    a_p = 2.0 * half_sin * half_sin / x_c ** p
    return QslConstants(p=p, x_c=x_c, a_p=a_p)


def moment_ep(state: SpectralState, p, reference: float = 0.0) -> float:
    """p-th absolute moment of the energy about ``reference``: sum w_j |E_j - ref|^p."""
    p = as_exponent(p).p
    reference = float(reference)
    if not math.isfinite(reference):
        raise OutOfRange("reference energy must be finite")
    dev = np.abs(state.energy_array() - reference)
    return float(np.sum(state.weight_array() * dev ** p))


def _moment_many_references(energies: np.ndarray, weights: np.ndarray,
                            refs: np.ndarray, p: float) -> np.ndarray:
    dev = np.abs(energies[None, :] - refs[:, None])
    return np.sum(weights[None, :] * dev ** p, axis=-1)


def dpe(state: SpectralState, p) -> tuple[float, float]:
    """min over x of [sum w_j |E_j - x|^p]^{1/p}, with an attaining reference.

    Strategy by convexity class: weighted median for p = 1, weighted mean for
    p = 2, golden section on the support interval for other p > 1 (convex
    objective), exhaustive evaluation at the support energies for p < 1
    (concave-power sums minimize at a data point).
    """
    p = as_exponent(p).p
    energies = state.energy_array()
    weights = state.weight_array()
    support = energies[weights > 0.0]
    lo, hi = float(support.min()), float(support.max())
    if lo == hi:
        return 0.0, lo

    if abs(p - 1.0) <= 1e-15:
        order = np.argsort(energies)
        e_sorted = energies[order]
        w_sorted = weights[order]
        cum = np.cumsum(w_sorted)
        k = int(np.searchsorted(cum, 0.5 - 1e-15))
        ref = float(e_sorted[k])
        # An exact 0.5 split leaves a whole interval of minimizers; report
        # its midpoint for a deterministic, symmetry-respecting choice.
        if k + 1 < e_sorted.size and abs(cum[k] - 0.5) <= 1e-12:
            ref = 0.5 * (float(e_sorted[k]) + float(e_sorted[k + 1]))
        value = float(np.sum(weights * np.abs(energies - ref)))
        return value, ref

    if abs(p - 2.0) <= 1e-15:
        ref = float(np.sum(weights * energies))
        value = math.sqrt(float(np.sum(weights * (energies - ref) ** 2)))
        return value, ref

    if p > 1.0:
        def objective(x: float) -> float:
            return float(np.sum(weights * np.abs(energies - x) ** p))

        span = hi - lo
        ref, best, _ = golden_min(objective, lo, hi, xtol=1e-12 * max(1.0, span))
        # On flat basins the solver can stop a hair off an exactly
        # representable optimum (symmetric spectra minimize at 0); closing
        # candidates keep the minimized moment from landing above the
        # reference-0 one, which tau_c2 >= tau_c1 relies on.
        for candidate in (0.0, float(np.sum(weights * energies))):
            value = objective(candidate)
            if value < best:
                ref, best = candidate, value
        return best ** (1.0 / p), float(ref)

    # 0 < p < 1: check every support energy.
    candidates = np.unique(support)
    values = _moment_many_references(energies, weights, candidates, p)
    k = int(np.argmin(values))
    return float(values[k]) ** (1.0 / p), float(candidates[k])


def _bound_prefactor(a_p: float, epsilon: float, p: float) -> float:
    return ((1.0 - math.sqrt(epsilon)) / a_p) ** (1.0 / p)


def tau_c1(state: SpectralState, p, epsilon: float, *, hbar: float = 1.0) -> float:
    """hbar * ((1 - sqrt(eps)) / (A_p * <|E|^p>))^{1/p}; zero when eps = 1."""
    p = as_exponent(p).p
    epsilon = _check_epsilon(epsilon)
    hbar = _check_hbar(hbar)
    if epsilon == 1.0:
        return 0.0
    consts = amplitude_constant(p)
    moment = moment_ep(state, p, 0.0)
    if moment == 0.0:
        raise DegenerateState(
            "state is concentrated at energy 0, so no finite moment-based bound exists"
        )
    return hbar * _bound_prefactor(consts.a_p, epsilon, p) / moment ** (1.0 / p)


def tau_c2(state: SpectralState, p, epsilon: float, *, hbar: float = 1.0) -> QslReport:
    """Reference-optimized bound hbar/D_pE * ((1 - sqrt(eps))/A_p)^{1/p}, with a full report.

    Never below tau_c1, since D_pE <= <|E|^p>^{1/p}.  The reported phase
    angles are E_j * tau_c2 / hbar, the accumulated rotation of each energy
    mode over the bound time.
    """
    p = as_exponent(p).p
    epsilon = _check_epsilon(epsilon)
    hbar = _check_hbar(hbar)
    consts = amplitude_constant(p)
    moment = moment_ep(state, p, 0.0)
    spread, reference = dpe(state, p)

    if epsilon == 1.0:
        t1 = 0.0
        t2 = 0.0
    else:
        if spread == 0.0:
            raise DegenerateState(
                "state has zero energy spread, so it only ever accumulates a global phase"
            )
        t2 = hbar * _bound_prefactor(consts.a_p, epsilon, p) / spread
        t1 = hbar * _bound_prefactor(consts.a_p, epsilon, p) / moment ** (1.0 / p)

    angles = tuple(float(e) * t2 / hbar for e in state.energies)
    return QslReport(
        tau_c1=t1,
        tau_c2=t2,
        moment_ep=moment,
        dpe=spread,
        optimal_reference=reference,
        epsilon=epsilon,
        phase_angles=angles,
        p=p,
        hbar=hbar,
        tight=p <= TIGHT_P_MAX + 1e-12,
    )


def magic_state(p, epsilon: float, energy: float) -> SpectralState:
    """Three-level state (weights 1-beta, beta/2, beta/2 at 0, -E, +E) saturating the bounds.

    beta = (1 - sqrt(eps)) / (A_p x_c^p) is a probability for every epsilon
    whenever 0 < p <= pi/2.  For larger p the construction is returned as
    long as beta <= 1 (it exists for some epsilon up to p < 2) and InvalidP
    is raised otherwise.
    """
    p = as_exponent(p).p
    epsilon = _check_epsilon(epsilon)
    energy = float(energy)
    if not (math.isfinite(energy) and energy > 0.0):
        raise OutOfRange(f"energy scale must be positive, got {energy}")

    if epsilon == 1.0:
        beta = 0.0
    else:
        consts = amplitude_constant(p)
        denom = consts.a_p * consts.x_c ** p  # equals 1 - cos(x_c)
        if denom == 0.0:
            raise InvalidP(
                f"no saturating three-level state exists for p = {p} (critical angle is 0)"
            )
        beta = (1.0 - math.sqrt(epsilon)) / denom
        if beta > 1.0 + 1e-12:
            raise InvalidP(
                f"saturating construction needs occupation beta = {beta:.6f} > 1 "
                f"for p = {p}, epsilon = {epsilon}"
            )
        beta = min(beta, 1.0)
    return SpectralState(
        energies=(0.0, -energy, energy),
        weights=(1.0 - beta, 0.5 * beta, 0.5 * beta),
    )


def fidelity_at(state: SpectralState, t: float, *, hbar: float = 1.0) -> float:
    """Survival probability |sum_j w_j e^{-i E_j t / hbar}|^2."""
    hbar = _check_hbar(hbar)
    t = float(t)
    if not math.isfinite(t):
        raise OutOfRange("time must be finite")
    amp = np.sum(state.weight_array() * np.exp(-1j * state.energy_array() * (t / hbar)))
    return float(amp.real * amp.real + amp.imag * amp.imag)


def _approx_real_gcd(values: np.ndarray, tol: float) -> float:
    """Euclid with a cutoff: the largest scale dividing every value within tol."""
    g = 0.0
    for v in values:
        a, b = max(g, float(v)), min(g, float(v))
        while b > tol:
            a, b = b, math.fmod(a, b)
        g = a
    return g


def first_passage_time(state: SpectralState, epsilon: float, *, hbar: float = 1.0) -> float:
    """Smallest t > 0 with fidelity_at(state, t) = epsilon, by scan plus refinement.

    The fidelity is a trigonometric polynomial in t whose frequencies are the
    energy gaps, bounded by 2*max|E_j|/hbar, so scanning with step
    pi*hbar/(64*max|E_j|) cannot hop over a crossing: any dip below the
    target between samples forces a sampled value within 1.3e-3 of it
    (curvature bound), which triggers golden-section refinement.  Transversal
    crossings are bisected to 1e-12 relative width; tangential touches are
    accepted when the refined gap is at most 1e-12.

    The scan stops at the horizon 2*pi*hbar/g, where g is an approximate gcd
    of the energy gaps floored at max-gap/256 (quasi-periodic spectra have no
    finite recurrence, so the floor bounds runtime); the horizon is further
    capped at 2^22 steps.  Past it, NeverAttained reports the infimum seen.
    """
    epsilon = _check_epsilon(epsilon, allow_one=False)
    hbar = _check_hbar(hbar)
    energies = state.energy_array()
    weights = state.weight_array()
    support = np.unique(energies[weights > 0.0])
    if support.size < 2:
        raise NeverAttained(
            "state is stationary (single occupied level): fidelity is identically 1",
            scanned_min=1.0,
            horizon=math.inf,
        )

    emax = float(np.abs(energies).max())
    gaps = np.abs(support[None, :] - support[:, None])[np.triu_indices(support.size, k=1)]
    gap_max = float(gaps.max())
    g = _approx_real_gcd(gaps, tol=1e-9 * gap_max)
    g = max(g, gap_max / 256.0)

    step = math.pi * hbar / (64.0 * emax)
    horizon = 2.0 * math.pi * hbar / g + step
    total_steps = min(int(math.ceil(horizon / step)) + 1, _MAX_SCAN_STEPS)

    scaled_e = energies / hbar

    def phi(t: float) -> float:
        amp = np.sum(weights * np.exp(-1j * scaled_e * t))
        return float(amp.real * amp.real + amp.imag * amp.imag) - epsilon

    def refine_touch(t_lo: float, t_mid: float, t_hi: float) -> float | None:
        x_best, f_best, _ = golden_min(phi, t_lo, t_hi, xtol=1e-12 * max(t_mid, step))
        if f_best > _TOUCH_ACCEPT:
            return None
        if f_best < -_TOUCH_ACCEPT:
            # The dip actually crosses; report its entry edge.
            return bisect_root(phi, t_lo, x_best, xtol=0.0, rtol=1e-12)
        return x_best

    scanned_min = phi(0.0)
    # Carry the last two (t, phi) samples across chunk boundaries so local
    # minima straddling a boundary are still seen.
    carry_t = np.array([0.0])
    carry_phi = np.array([scanned_min])
    next_index = 1
    while next_index < total_steps:
        count = min(_SCAN_CHUNK, total_steps - next_index)
        ts = (next_index + np.arange(count)) * step
        amps = np.exp(-1j * np.outer(ts, scaled_e)) @ weights
        phis = amps.real ** 2 + amps.imag ** 2 - epsilon
        scanned_min = min(scanned_min, float(phis.min()))

        t_all = np.concatenate([carry_t, ts])
        phi_all = np.concatenate([carry_phi, phis])
        # Crossings pair (k-1, k); pairs wholly inside the carry were already
        # handled last chunk.  Touch candidates need both neighbors, so the
        # final sample of the previous chunk (now at index carry-1) is only
        # examined here, once its right neighbor exists.
        crossings = np.flatnonzero((phi_all[:-1] > 0.0) & (phi_all[1:] <= 0.0)) + 1
        interior = np.flatnonzero(
            (phi_all[1:-1] <= _TOUCH_DETECT)
            & (phi_all[1:-1] > 0.0)
            & (phi_all[:-2] >= phi_all[1:-1])
            & (phi_all[2:] >= phi_all[1:-1])
        ) + 1
        events = sorted(
            [(int(k), "cross") for k in crossings if k >= carry_t.size]
            + [(int(k), "touch") for k in interior if k >= carry_t.size - 1]
        )
        for k, kind in events:
            if kind == "cross":
                if phi_all[k] == 0.0:
                    return float(t_all[k])
                return bisect_root(phi, float(t_all[k - 1]), float(t_all[k]),
                                   xtol=0.0, rtol=1e-12)
            hit = refine_touch(float(t_all[k - 1]), float(t_all[k]), float(t_all[k + 1]))
            if hit is not None:
                return hit
        carry = min(2, t_all.size)
        carry_t = t_all[-carry:]
        carry_phi = phi_all[-carry:]
        next_index += count

    raise NeverAttained(
        f"fidelity never reached {epsilon} on the scanned horizon "
        f"(closest approach {scanned_min + epsilon:.6g})",
        scanned_min=scanned_min + epsilon,
        horizon=float(total_steps * step),
    )
