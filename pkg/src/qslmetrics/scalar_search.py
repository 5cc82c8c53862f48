"""One-dimensional root bracketing and golden-section minimization.

Plain textbook routines, kept local so the numerical tolerances used across
the package live in one place.  ``golden_min_batch`` runs the same golden
section shrink on a whole stack of intervals at once against a vectorized
objective; the callers use it to refine many candidate brackets in parallel.
"""

import math

import numpy as np

__all__ = ["bisect_root", "golden_min", "golden_min_batch"]

# 1/phi, the golden-section shrink factor.
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def bisect_root(f, lo: float, hi: float, *, xtol: float = 1e-13, rtol: float = 0.0,
                max_iter: int = 256) -> float:
    """Bisect a sign change of ``f`` on [lo, hi] down to the requested width.

    Requires f(lo) and f(hi) to have opposite (or zero) signs.  Stops when the
    bracket is narrower than ``max(xtol, rtol * |hi|)`` and returns its
    midpoint.
    """
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise ValueError(f"root not bracketed on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= max(xtol, rtol * abs(hi)):
            return mid
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (fhi > 0.0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def golden_min(f, lo: float, hi: float, *, xtol: float = 1e-12,
               max_iter: int = 200) -> tuple[float, float, int]:
    """Golden-section search for a minimum of ``f`` on [lo, hi].

    Intended for unimodal objectives but safe on any continuous one: the
    return value is the best point actually probed (endpoints included).
    Returns ``(x_best, f_best, evaluations)``.
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    best_x, best_f = (a, fa) if fa <= fb else (b, fb)
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    nev = 4
    for x, fx in ((x1, f1), (x2, f2)):
        if fx < best_f:
            best_x, best_f = x, fx
    it = 0
    while b - a > xtol and it < max_iter:
        if f1 <= f2:
            b = x2
            x2, f2 = x1, f1
            x1 = b - _INV_GOLDEN * (b - a)
            f1 = f(x1)
            if f1 < best_f:
                best_x, best_f = x1, f1
        else:
            a = x1
            x1, f1 = x2, f2
            x2 = a + _INV_GOLDEN * (b - a)
            f2 = f(x2)
            if f2 < best_f:
                best_x, best_f = x2, f2
        nev += 1
        it += 1
    return best_x, best_f, nev


def golden_min_batch(f_batch, lo, hi, *, xtol: float = 1e-12,
                     max_iter: int = 128) -> tuple[np.ndarray, np.ndarray, int]:
    """Golden-section shrink applied to a stack of intervals simultaneously.

    ``f_batch`` must map an array of abscissas to an array of objective values
    of the same shape.  All intervals are iterated until the widest one is
    below ``xtol``; the best probed point per interval is returned along with
    the total number of objective evaluations.
    """
    a = np.asarray(lo, dtype=float).copy()
    b = np.asarray(hi, dtype=float).copy()
    if a.shape != b.shape:
        raise ValueError("interval endpoint arrays must have matching shapes")
    fa = f_batch(a)
    fb = f_batch(b)
    best_x = np.where(fa <= fb, a, b)
    best_f = np.minimum(fa, fb)
    x1 = b - _INV_GOLDEN * (b - a)
    x2 = a + _INV_GOLDEN * (b - a)
    f1 = f_batch(x1)
    f2 = f_batch(x2)
    nev = 4 * a.size
    for x, fx in ((x1, f1), (x2, f2)):
        better = fx < best_f
        best_x = np.where(better, x, best_x)
        best_f = np.minimum(best_f, fx)
    it = 0
    while it < max_iter and np.any(b - a > xtol):
        left = f1 <= f2
        b = np.where(left, x2, b)
        a = np.where(left, a, x1)
        inner1 = b - _INV_GOLDEN * (b - a)
        inner2 = a + _INV_GOLDEN * (b - a)
        x_new = np.where(left, inner1, inner2)
        f_new = f_batch(x_new)
        nev += x_new.size
        # Shrinking right keeps old x1 as the new x2; shrinking left keeps
        # old x2 as the new x1.  The other probe is the fresh evaluation.
        x1_next = np.where(left, inner1, x2)
        f1_next = np.where(left, f_new, f2)
        x2_next = np.where(left, x1, inner2)
        f2_next = np.where(left, f1, f_new)
        x1, f1, x2, f2 = x1_next, f1_next, x2_next, f2_next
        better = f_new < best_f
        best_x = np.where(better, x_new, best_x)
        best_f = np.minimum(best_f, f_new)
        it += 1
    return best_x, best_f, nev
