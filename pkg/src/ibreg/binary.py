"""Analytic relevance-rate curves for the doubly symmetric binary source.

The source is ``X2 ~ Bern(1/2)``, ``X1 = X2 xor Z`` with ``Z ~ Bern(q)``, and
a hidden ``Y = X1 xor W`` with ``W ~ Bern(p)``; ``p, q`` strictly inside
``(0, 1/2)``.  One encoder observes ``X1``, the decoder observes ``X2`` and
wants information about ``Y``.

Two crossover-parametrised curves drive everything, both strictly convex on
``[0, 1]`` and symmetric about ``r = 1/2``:

    g(r) = h2(r * q) - h2(r)                 (rate of a BSC(r) test channel)
    f(r) = relevance gain of the same channel,  0 <= f(r) <= g(r)

The rate-limited relevance curve ``mu_d`` is the upper concave envelope of
the parametric curve ``(g(r), f(r))`` shifted by ``1 - h2(p*q)``.  It is
linear with slope ``alpha* = f(r_c)/g(r_c)`` up to a critical rate
``R_c = g(r_c)`` (a time-sharing segment) and follows ``f(g^{-1}(R))``
beyond.  For some ``(p, q)`` the tangency degenerates (``R_c -> 0``) and the
curve is the plain ``f(g^{-1}(R))`` branch everywhere; ``critical_point``
raises ``SolverError`` in that regime and ``mu_d`` falls back accordingly.

Two independent oracles are provided for cross-checking ``mu_d``: a dual
min-max formulation (``mu_d_dual``) and a brute-force two-point time-sharing
search (``mu_d_timeshare_oracle``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import log2

import numpy as np

from .bentropy import h2, h2_arr, star
from .errors import ArgumentError, DomainError, SolverError
from .optimize import bisect_decreasing_inverse, bisect_root, golden_max, golden_min
from .pmf import Axis, Channel, JointPmf

__all__ = [
    "BinaryModel",
    "CriticalPoint",
    "TestChannelSpec",
    "g",
    "f",
    "f_alt",
    "g_prime",
    "f_prime",
    "g_inverse",
    "critical_point",
    "mu_ed",
    "mu_d",
    "mu_d_dual",
    "mu_d_timeshare_oracle",
    "optimal_channel",
]


def _check_open_half(name: str, v: float) -> float:
    v = float(v)
    if not 0.0 < v < 0.5:
        raise DomainError(f"{name}={v!r} must lie strictly inside (0, 1/2)")
    return v


def _check_r(r: float) -> float:
    r = float(r)
    if not -1e-12 <= r <= 1.0 + 1e-12:
        raise DomainError(f"crossover r={r!r} outside [0, 1]")
    return min(max(r, 0.0), 1.0)


@dataclass(frozen=True)
class BinaryModel:
    """Doubly symmetric binary source parameters.

    ``q`` is the crossover between the observed pair (X1 = X2 xor Bern(q));
    ``p`` is the crossover of the hidden link (Y = X xor Bern(p)).
    """

    p: float
    q: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", _check_open_half("p", self.p))
        object.__setattr__(self, "q", _check_open_half("q", self.q))

    def half_round_source(self) -> JointPmf:
        """Joint pmf over axes (x1, x2, y) with Y = X1 xor Bern(p)."""
        q_m = np.array([[1 - self.q, self.q], [self.q, 1 - self.q]])
        p_m = np.array([[1 - self.p, self.p], [self.p, 1 - self.p]])
        t = 0.5 * np.einsum("ba,ac->abc", q_m, p_m)  # a=x1, b=x2, c=y
        return JointPmf((Axis("x1", 2), Axis("x2", 2), Axis("y", 2)), t)

    def twcib_source(self) -> JointPmf:
        """Joint pmf over (x1, x2, y1, y2): Y1 = X2 xor Bern(p), Y2 = X1 xor Bern(p)."""
        q_m = np.array([[1 - self.q, self.q], [self.q, 1 - self.q]])
        p_m = np.array([[1 - self.p, self.p], [self.p, 1 - self.p]])
        t = 0.5 * np.einsum("ba,bc,ad->abcd", q_m, p_m, p_m)  # a=x1 b=x2 c=y1 d=y2
        return JointPmf(
            (Axis("x1", 2), Axis("x2", 2), Axis("y1", 2), Axis("y2", 2)), t)


# ---------------------------------------------------------------------------
# the two convex crossover curves and their calculus
# ---------------------------------------------------------------------------


def g(r: float, q: float) -> float:
    """Rate curve h2(r * q) - h2(r); decreasing from h2(q) to 0 on [0, 1/2]."""
    r = _check_r(r)
    q = _check_open_half("q", q)
    return h2(star(r, q)) - h2(r)


def f(r: float, p: float, q: float) -> float:
    """Relevance curve; first displayed algebraic form."""
    r = _check_r(r)
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    w = star(q, r)
    return (h2(star(p, q))
            - (1.0 - w) * h2(star(p, q * r / (1.0 - w)))
            - w * h2(star(p, (1.0 - q) * r / w)))


def f_alt(r: float, p: float, q: float) -> float:
    """Relevance curve; second displayed algebraic form (cross-check of ``f``)."""
    r = _check_r(r)
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    w = star(p, q)
    gam = p * q / (1.0 - w)
    dlt = p * (1.0 - q) / w
    return (h2(star(r, q))
            - (1.0 - w) * h2(star(r, gam))
            - w * h2(star(r, dlt)))


def _h2p(x: float) -> float:
    return log2((1.0 - x) / x)


def g_prime(r: float, q: float) -> float:
    """Analytic derivative of ``g``; valid for r strictly inside (0, 1)."""
    q = _check_open_half("q", q)
    r = float(r)
    if not 0.0 < r < 1.0:
        raise DomainError(f"g_prime needs r in (0, 1), got {r!r}")
    return (1.0 - 2.0 * q) * _h2p(star(r, q)) - _h2p(r)


def f_prime(r: float, p: float, q: float) -> float:
    """Analytic derivative of ``f`` (via the second algebraic form)."""
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    r = _check_r(r)
    w = star(p, q)
    gam = p * q / (1.0 - w)
    dlt = p * (1.0 - q) / w
    return ((1.0 - 2.0 * q) * _h2p(star(r, q))
            - (1.0 - w) * (1.0 - 2.0 * gam) * _h2p(star(r, gam))
            - w * (1.0 - 2.0 * dlt) * _h2p(star(r, dlt)))


def _g_vec(r: np.ndarray, q: float) -> np.ndarray:
    return h2_arr(r * (1 - 2 * q) + q) - h2_arr(r)


def _f_vec(r: np.ndarray, p: float, q: float) -> np.ndarray:
    w = star(p, q)
    gam = p * q / (1.0 - w)
    dlt = p * (1.0 - q) / w
    return (h2_arr(r * (1 - 2 * q) + q)
            - (1.0 - w) * h2_arr(r * (1 - 2 * gam) + gam)
            - w * h2_arr(r * (1 - 2 * dlt) + dlt))


def g_inverse(rate: float, q: float) -> float:
    """Unique r in [0, 1/2] with g(r) = rate; bisection on the decreasing branch."""
    q = _check_open_half("q", q)
    rate = float(rate)
    hq = h2(q)
    if rate < -1e-12 or rate > hq + 1e-12:
        raise DomainError(f"rate {rate!r} outside [0, h2(q)={hq!r}]")
    rate = min(max(rate, 0.0), hq)
    if rate == 0.0:
        # g is quadratically flat at 1/2; bisection stalls on the float plateau
        return 0.5
    return bisect_decreasing_inverse(lambda r: g(r, q), rate, 0.0, 0.5)


# ---------------------------------------------------------------------------
# critical point of the concave envelope
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalPoint:
    """Tangency point where the time-sharing segment meets the curved branch."""

    crossover: float    # r_c
    rate: float         # R_c = g(r_c)
    alpha_star: float   # envelope slope f(r_c) / R_c

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha_star < 1.0:
            raise DomainError(f"alpha_star={self.alpha_star!r} outside (0, 1)")


_SCAN_N = 2048


def critical_point(p: float, q: float) -> CriticalPoint:
    """Solve f'(r) g(r) = f(r) g'(r) for the interior tangency crossover r_c.

    Scans 2048 points of r in (0, 1/2) for a sign change of
    ``f' g - f g'`` and bisects the bracket.  When the map r -> f(r)/g(r) is
    monotone the tangency degenerates to the boundary (no time-sharing
    segment, R_c -> 0); that raises ``SolverError`` with the scan summary.
    """
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    rs = np.linspace(1e-6, 0.5 - 1e-6, _SCAN_N)
    one_m_2q = 1.0 - 2.0 * q
    w = star(p, q)
    gam = p * q / (1.0 - w)
    dlt = p * (1.0 - q) / w

    def h2p_arr(x):
        return np.log2((1.0 - x) / x)

    gp = one_m_2q * h2p_arr(rs * one_m_2q + q) - h2p_arr(rs)
    fp = (one_m_2q * h2p_arr(rs * one_m_2q + q)
          - (1 - w) * (1 - 2 * gam) * h2p_arr(rs * (1 - 2 * gam) + gam)
          - w * (1 - 2 * dlt) * h2p_arr(rs * (1 - 2 * dlt) + dlt))
    phi = fp * _g_vec(rs, q) - _f_vec(rs, p, q) * gp

    hits = np.nonzero((phi[:-1] > 0.0) & (phi[1:] <= 0.0))[0]
    if len(hits) == 0:
        raise SolverError(
            "no tangency sign change on (0, 1/2): "
            f"scan of {_SCAN_N} points has phi in [{phi.min():.3e}, {phi.max():.3e}]; "
            "the relevance-rate curve has no time-sharing segment (R_c -> 0)")
    lo, hi = float(rs[hits[0]]), float(rs[hits[0] + 1])

    def phi_scalar(r: float) -> float:
        return f_prime(r, p, q) * g(r, q) - f(r, p, q) * g_prime(r, q)

    r_c = bisect_root(phi_scalar, lo, hi)
    if r_c > 0.5 - 1e-3:
        raise SolverError(
            f"tangency found only at the boundary (r_c={r_c!r}); "
            "treating the time-sharing segment as empty (R_c -> 0)")
    rate = g(r_c, q)
    return CriticalPoint(r_c, rate, f(r_c, p, q) / rate)


@lru_cache(maxsize=256)
def _critical_or_none(p: float, q: float) -> CriticalPoint | None:
    try:
        return critical_point(p, q)
    except SolverError:
        return None


# ---------------------------------------------------------------------------
# relevance-rate functions
# ---------------------------------------------------------------------------


def mu_ed(rate: float, p: float, q: float) -> float:
    """Relevance-rate function with side information at encoder and decoder.

    Equals ``1 - h2(h2_inv([h2(q) - R]^+) * p)``; constant ``1 - h2(p)`` for
    R >= h2(q).
    """
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    rate = float(rate)
    if rate < 0.0:
        raise DomainError(f"rate must be nonnegative, got {rate!r}")
    residual = max(h2(q) - rate, 0.0)
    # exact inverse: the residual entropy is reached at crossover s
    from .bentropy import h2_inv
    return 1.0 - h2(star(h2_inv(residual), p))


def mu_d(rate: float, p: float, q: float) -> float:
    """Relevance-rate function with side information only at the decoder.

    Piecewise: linear with slope ``alpha*`` on [0, R_c], then
    ``1 - h2(p*q) + f(g^{-1}(R))`` up to h2(q), constant ``1 - h2(p)`` beyond.
    """
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    rate = float(rate)
    if rate < 0.0:
        raise DomainError(f"rate must be nonnegative, got {rate!r}")
    if rate >= h2(q):
        return 1.0 - h2(p)
    base = 1.0 - h2(star(p, q))
    cp = _critical_or_none(p, q)
    if cp is not None and rate <= cp.rate:
        return base + cp.alpha_star * rate
    return base + f(g_inverse(rate, q), p, q)


def mu_d_dual(rate: float, p: float, q: float, *, alpha_tol: float = 1e-8,
              grid_n: int = 4096) -> float:
    """Independent dual oracle for ``mu_d``:

        1 - h2(p*q) + min_{alpha in [0,1]} max_{r in [0,1/2]} f(r) + alpha (R - g(r))

    Outer golden section on alpha (the inner max is convex in alpha); inner
    maximisation by a dense grid plus golden refinement of the top interior
    local maxima.
    """
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    rate = float(rate)
    hq = h2(q)
    if rate < -1e-12 or rate > hq + 1e-12:
        raise DomainError(f"rate {rate!r} outside [0, h2(q)={hq!r}]")
    rgrid, fg, gg = _dual_grids(p, q, grid_n)

    def objective(r: float, alpha: float) -> float:
        return f(r, p, q) - alpha * g(r, q)

    def inner_max(alpha: float) -> float:
        vals = fg - alpha * gg
        best = max(float(vals[0]), float(vals[-1]))
        interior = np.nonzero((vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:]))[0] + 1
        if len(interior):
            order = interior[np.argsort(vals[interior])[::-1][:2]]
        else:
            order = []
        brackets = [(rgrid[i - 1], rgrid[i + 1]) for i in order]
        # the left edge hides a narrow spike for small alpha: always refine it
        brackets.append((float(rgrid[0]), float(rgrid[2])))
        for lo, hi in brackets:
            _, v = golden_max(lambda r: objective(r, alpha), lo, hi, tol=1e-10)
            best = max(best, v)
        return best

    _, value = golden_min(lambda a: inner_max(a) + a * rate, 0.0, 1.0, tol=alpha_tol)
    return 1.0 - h2(star(p, q)) + value


@lru_cache(maxsize=64)
def _dual_grids(p: float, q: float, grid_n: int):
    rgrid = np.linspace(0.0, 0.5, grid_n)
    return rgrid, _f_vec(rgrid, p, q), _g_vec(rgrid, q)


def mu_d_timeshare_oracle(rate: float, p: float, q: float, grid_n: int = 512) -> float:
    """Second oracle: brute-force two-point time sharing on an r-grid.

    Maximises ``1 - h2(p*q) + lam f(r1) + (1-lam) f(r2)`` subject to
    ``lam g(r1) + (1-lam) g(r2) = rate`` with lam solved from the constraint.
    Lower-bounds ``mu_d`` by construction; accuracy is limited by the grid.
    """
    if grid_n < 64:
        raise ArgumentError(f"grid_n must be >= 64, got {grid_n}")
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    rate = float(rate)
    if rate < 0.0 or rate > h2(q) + 1e-12:
        raise DomainError(f"rate {rate!r} outside [0, h2(q)]")
    r = np.linspace(0.0, 0.5, grid_n)
    gv = _g_vec(r, q)
    fv = _f_vec(r, p, q)
    g1, g2 = gv[:, None], gv[None, :]
    f1, f2 = fv[:, None], fv[None, :]
    den = g1 - g2
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.where(den != 0.0, (rate - g2) / den, np.nan)
    valid = np.isfinite(lam) & (lam >= 0.0) & (lam <= 1.0)
    obj = np.where(valid, lam * f1 + (1.0 - lam) * f2, -np.inf)
    best = float(obj.max())
    # degenerate single-point solutions g(r) == rate are covered in the limit;
    # include them explicitly for exactness at the endpoints
    exact = np.isclose(gv, rate, rtol=0.0, atol=1e-15)
    if exact.any():
        best = max(best, float(fv[exact].max()))
    return 1.0 - h2(star(p, q)) + best


# ---------------------------------------------------------------------------
# optimal test channels
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TestChannelSpec:
    """Description of a relevance-optimal test channel on X1.

    ``kind`` is one of ``constant``, ``identity``, ``direct`` (a BSC with
    crossover ``r``) or ``timeshared`` (mix of a BSC(r_c) with weight ``lam``
    and an off symbol with weight ``1 - lam``).
    """

    kind: str
    r: float | None = None
    lam: float | None = None
    r_c: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "identity", "direct", "timeshared"):
            raise ArgumentError(f"unknown channel kind {self.kind!r}")
        if self.r is not None and not 0.0 <= self.r <= 0.5:
            raise DomainError(f"crossover r={self.r!r} outside [0, 1/2]")
        if self.r_c is not None and not 0.0 <= self.r_c <= 0.5:
            raise DomainError(f"crossover r_c={self.r_c!r} outside [0, 1/2]")
        if self.lam is not None and not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lam={self.lam!r} outside [0, 1]")

    def to_channel(self, input_axis: str = "x1", output_name: str = "u",
                   out_card: int | None = None) -> Channel:
        """Materialise as a :class:`Channel` (optionally padded with unused
        output symbols up to ``out_card``)."""
        if self.kind == "constant":
            card = out_card or 1
            t = np.zeros((2, card))
            t[:, 0] = 1.0
            return Channel((input_axis,), Axis(output_name, card), t)
        if self.kind == "identity":
            return Channel.bsc(input_axis, output_name, 0.0, out_card or 2)
        if self.kind == "direct":
            return Channel.bsc(input_axis, output_name, float(self.r), out_card or 2)
        card = out_card or 3
        if card < 3:
            raise ArgumentError("timeshared channel needs at least 3 output symbols")
        t = np.zeros((2, card))
        lam, rc = float(self.lam), float(self.r_c)
        t[0, 0] = t[1, 1] = lam * (1.0 - rc)
        t[0, 1] = t[1, 0] = lam * rc
        t[:, 2] = 1.0 - lam
        return Channel((input_axis,), Axis(output_name, card), t)


def optimal_channel(rate: float, p: float, q: float) -> TestChannelSpec:
    """Test channel achieving ``mu_d`` at the given rate.

    Identity beyond h2(q), a direct BSC(g^{-1}(R)) on the curved branch, and
    a time-shared BSC(r_c) with weight R/R_c on the linear segment.
    """
    p = _check_open_half("p", p)
    q = _check_open_half("q", q)
    rate = float(rate)
    if rate < 0.0:
        raise DomainError(f"rate must be nonnegative, got {rate!r}")
    if rate == 0.0:
        return TestChannelSpec("constant")
    if rate > h2(q):
        return TestChannelSpec("identity")
    cp = _critical_or_none(p, q)
    if cp is None or rate > cp.rate:
        return TestChannelSpec("direct", r=g_inverse(rate, q))
    return TestChannelSpec("timeshared", lam=rate / cp.rate, r_c=cp.crossover)
