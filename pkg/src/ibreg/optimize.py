"""Deterministic scalar solvers: golden-section search and bisection.

Only what the region computations need; no stochastic restarts.  Golden
section assumes a (weakly) unimodal objective on the bracket, which every
caller in this package guarantees by convexity/concavity arguments.
"""

from __future__ import annotations

from math import sqrt
from typing import Callable

from .errors import SolverError

_INVPHI = (sqrt(5.0) - 1.0) / 2.0

__all__ = ["golden_max", "golden_min", "bisect_root", "bisect_decreasing_inverse"]


def golden_max(fun: Callable[[float], float], lo: float, hi: float,
               tol: float = 1e-10) -> tuple[float, float]:
    """Maximise a unimodal function on [lo, hi]; returns (x, fun(x))."""
    a, b = float(lo), float(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    x = 0.5 * (a + b)
    return x, fun(x)


def golden_min(fun: Callable[[float], float], lo: float, hi: float,
               tol: float = 1e-10) -> tuple[float, float]:
    """Minimise a unimodal function on [lo, hi]; returns (x, fun(x))."""
    x, v = golden_max(lambda t: -fun(t), lo, hi, tol)
    return x, -v


def bisect_root(fun: Callable[[float], float], lo: float, hi: float,
                iterations: int = 100) -> float:
    """Root of ``fun`` on [lo, hi] given fun(lo) and fun(hi) of opposite sign."""
    flo, fhi = fun(lo), fun(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise SolverError(f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}")
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bisect_decreasing_inverse(fun: Callable[[float], float], target: float,
                              lo: float, hi: float, iterations: int = 100) -> float:
    """Solve fun(x) = target for a strictly decreasing ``fun`` on [lo, hi]."""
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if fun(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
