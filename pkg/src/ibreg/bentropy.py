"""Binary-entropy scalar utilities.

All quantities are in bits (logarithms base 2).  ``star`` is the binary
convolution ``a*b = a(1-b) + b(1-a)``, i.e. the crossover probability of two
cascaded binary symmetric channels.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError

__all__ = ["h2", "h2_inv", "star", "gerber_bound", "h2_arr"]

_EPS = 1e-12


def _check_range(name: str, x: float, lo: float, hi: float) -> float:
    # tolerate floating spill just outside the interval, reject real violations
    if x < lo - _EPS or x > hi + _EPS:
        raise DomainError(f"{name}={x!r} outside [{lo}, {hi}]")
    return min(max(x, lo), hi)


def h2(x: float) -> float:
    """Binary entropy -x*log2(x) - (1-x)*log2(1-x), with 0*log(0) = 0."""
    x = _check_range("x", float(x), 0.0, 1.0)
    out = 0.0
    for v in (x, 1.0 - x):
        if v > 0.0:
            out -= v * math.log2(v)
    return out


def h2_arr(x) -> np.ndarray:
    """Vectorised binary entropy (no domain check; 0*log(0) = 0)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for v in (x, 1.0 - x):
        m = v > 0.0
        out -= np.where(m, v * np.log2(np.where(m, v, 1.0)), 0.0)
    return out


def h2_inv(y: float) -> float:
    """Unique x in [0, 1/2] with h2(x) = y.

    Plain bisection, 60 iterations: monotone, derivative-free and
    unconditionally convergent; leaves |h2(x) - y| <= 1e-12.
    """
    y = _check_range("y", float(y), 0.0, 1.0)
    if y == 1.0:
        # h2 is flat at 1/2; bisection would stall on the float plateau
        return 0.5
    lo, hi = 0.0, 0.5
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if h2(mid) < y:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def star(a: float, b: float) -> float:
    """Binary convolution a(1-b) + b(1-a) of crossover probabilities."""
    a = _check_range("a", float(a), 0.0, 1.0)
    b = _check_range("b", float(b), 0.0, 1.0)
    return a * (1.0 - b) + b * (1.0 - a)


def gerber_bound(entropy_bits: float, p: float) -> float:
    """Mrs. Gerber lower bound h2(h2_inv(H) * p) on the output conditional entropy.

    ``entropy_bits`` is the conditional input entropy H in [0, 1]; ``p`` is the
    crossover of the binary symmetric channel, in [0, 1/2].
    """
    h = _check_range("entropy_bits", float(entropy_bits), 0.0, 1.0)
    p = _check_range("p", float(p), 0.0, 0.5)
    return h2(star(h2_inv(h), p))
