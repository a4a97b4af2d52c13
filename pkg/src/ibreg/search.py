"""Single-letter region evaluation over explicit auxiliary-channel stacks.

Evaluators for the two-way and broadcast regions of arbitrary discrete
sources (given a :class:`RoundSchedule` of auxiliary channels), the four
corner points induced by a fixed pair of auxiliaries, the seeded stochastic
search for the interactive binary curve, upper concave envelopes, and curve
inclusion checks.

Axis conventions: sources for the two-way evaluator carry axes
``x1, x2, y1, y2``; broadcast sources carry ``x1, x2, y``.  A schedule's
channels alternate encoder 1 / encoder 2 and each channel conditions on the
observer's source axis plus every previously generated description.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bentropy import h2
from .binary import BinaryModel, optimal_channel
from .curves import RegionCurve
from .errors import (
    ArgumentError,
    AxisError,
    CardinalityError,
    ComparisonError,
    StructureError,
)
from .pmf import (
    Channel,
    JointPmf,
    compose_markov,
    conditional_mutual_information as cmi,
    marginalize,
    mutual_information as mi,
)

__all__ = [
    "RegionPoint",
    "EnvelopePoint",
    "RoundSchedule",
    "InclusionVerdict",
    "evaluate_twcib",
    "evaluate_cdib_inner",
    "corner_points_outer",
    "upper_concave_envelope",
    "envelope_value",
    "search_mu_int",
    "search_mu_int_detailed",
    "check_inclusion",
]


@dataclass(frozen=True)
class RegionPoint:
    """One evaluated tuple of the achievable set.

    Two-way evaluations fill ``mu1``/``mu2``; broadcast evaluations fill
    ``mu``.  ``provenance`` hashes the channel stack (plus seed for points
    produced by a stochastic search).
    """

    r1: float
    r2: float
    sum_rate: float
    mu: float | None = None
    mu1: float | None = None
    mu2: float | None = None
    provenance: str = ""


@dataclass(frozen=True)
class EnvelopePoint:
    x: float
    y: float
    is_vertex: bool = True


def _stack_hash(channels, seed=None) -> str:
    h = hashlib.sha256()
    for ch in channels:
        h.update(repr(ch.input_axes).encode())
        h.update(repr((ch.output.name, ch.output.card)).encode())
        h.update(np.ascontiguousarray(ch.table).tobytes())
    if seed is not None:
        h.update(f"seed={seed}".encode())
    return h.hexdigest()[:16]


# ---------------------------------------------------------------------------
# round schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RoundSchedule:
    """An ordered stack of 2K auxiliary channels, encoder 1 first each round.

    The l-th encoder-1 channel must condition on ``x1`` plus all previously
    generated descriptions; the l-th encoder-2 channel on ``x2`` plus all
    previous descriptions including the current encoder-1 one.  Output
    cardinalities are checked against the single-letter bounds
    (``bound_rule='twcib'``: |X| * |history| + 3, last encoder-2 output + 1;
    ``bound_rule='cdib'``: + 4 on non-final rounds, + 3 / + 1 on the final
    encoder-1 / encoder-2 outputs).
    """

    rounds: int
    channels: tuple[Channel, ...]
    x1_axis: str = "x1"
    x2_axis: str = "x2"
    bound_rule: str = "twcib"

    def __post_init__(self) -> None:
        object.__setattr__(self, "channels", tuple(self.channels))
        k = int(self.rounds)
        if k < 1:
            raise ArgumentError(f"rounds must be >= 1, got {self.rounds!r}")
        if self.bound_rule not in ("twcib", "cdib"):
            raise ArgumentError(f"bound_rule must be 'twcib' or 'cdib', got {self.bound_rule!r}")
        if len(self.channels) != 2 * k:
            raise ArgumentError(
                f"need 2K = {2 * k} channels, got {len(self.channels)}")
        names = [ch.output.name for ch in self.channels]
        if len(set(names)) != len(names):
            raise AxisError(f"duplicate description names {names}")
        if self.x1_axis in names or self.x2_axis in names:
            raise AxisError("description names collide with source axes")
        self._check_structure(k)
        self._check_bounds(k)

    def _input_card(self, ch: Channel, axis: str) -> int:
        return ch.input_cards[ch.input_axes.index(axis)]

    def _check_structure(self, k: int) -> None:
        history: list[str] = []
        for l in range(k):
            enc1 = self.channels[2 * l]
            want1 = {self.x1_axis, *history}
            if set(enc1.input_axes) != want1:
                raise StructureError(
                    f"round {l + 1} encoder-1 channel conditions on "
                    f"{set(enc1.input_axes)}, expected {want1}")
            history.append(enc1.output.name)
            enc2 = self.channels[2 * l + 1]
            want2 = {self.x2_axis, *history}
            if set(enc2.input_axes) != want2:
                raise StructureError(
                    f"round {l + 1} encoder-2 channel conditions on "
                    f"{set(enc2.input_axes)}, expected {want2}")
            history.append(enc2.output.name)
        # description alphabets must be quoted consistently downstream
        cards = {ch.output.name: ch.output.card for ch in self.channels}
        for ch in self.channels:
            for axis in ch.input_axes:
                if axis in cards and self._input_card(ch, axis) != cards[axis]:
                    raise StructureError(
                        f"channel for {ch.output.name!r} expects |{axis}| = "
                        f"{self._input_card(ch, axis)}, description has {cards[axis]}")

    def _check_bounds(self, k: int) -> None:
        x1_card = self._input_card(self.channels[0], self.x1_axis)
        x2_card = self._input_card(self.channels[1], self.x2_axis)
        w = 1  # alphabet size of the accumulated description history
        for l in range(k):
            final = l == k - 1
            enc1 = self.channels[2 * l]
            if self.bound_rule == "twcib":
                slack1 = 3
            else:
                slack1 = 3 if final else 4
            bound1 = x1_card * w + slack1
            if enc1.output.card > bound1:
                raise CardinalityError(
                    f"|{enc1.output.name}| = {enc1.output.card} exceeds bound {bound1}")
            w *= enc1.output.card
            enc2 = self.channels[2 * l + 1]
            if final:
                slack2 = 1
            else:
                slack2 = 3 if self.bound_rule == "twcib" else 4
            bound2 = x2_card * w + slack2
            if enc2.output.card > bound2:
                raise CardinalityError(
                    f"|{enc2.output.name}| = {enc2.output.card} exceeds bound {bound2}")
            w *= enc2.output.card

    def description_names(self) -> tuple[str, ...]:
        return tuple(ch.output.name for ch in self.channels)


def _composed(source: JointPmf, sched: RoundSchedule, required_axes) -> JointPmf:
    for axis in required_axes:
        if axis not in source.axis_names:
            raise AxisError(f"source lacks required axis {axis!r}")
    q = source
    for ch in sched.channels:
        q = compose_markov(q, ch)
    return q


def evaluate_twcib(source: JointPmf, sched: RoundSchedule,
                   y1_axis: str = "y1", y2_axis: str = "y2") -> RegionPoint:
    """Corner of the two-way achievable set for one channel stack.

    Returns R1 = I(X1;W|X2), R2 = I(X2;W|X1), mu1 = I(Y1;W,X1),
    mu2 = I(Y2;W,X2) where W is the full description history.
    """
    x1, x2 = sched.x1_axis, sched.x2_axis
    q = _composed(source, sched, (x1, x2, y1_axis, y2_axis))
    w = list(sched.description_names())
    r1 = cmi(q, [x1], w, [x2])
    r2 = cmi(q, [x2], w, [x1])
    return RegionPoint(
        r1=r1, r2=r2, sum_rate=r1 + r2,
        mu1=mi(q, [y1_axis], w + [x1]),
        mu2=mi(q, [y2_axis], w + [x2]),
        provenance=_stack_hash(sched.channels),
    )


def evaluate_cdib_inner(source: JointPmf, sched: RoundSchedule,
                        y_axis: str = "y") -> RegionPoint:
    """Broadcast inner-bound tuple for one channel stack.

    R1 = I(X1;W|X2); R2 = I(X2;V_2K|W_2K) + I(X2;W_2K|X1) where V_2K is the
    final encoder-2 description and W_2K everything before it;
    sum = I(X1,X2;W); mu = I(Y;W).
    """
    if sched.bound_rule != "cdib":
        sched = RoundSchedule(sched.rounds, sched.channels, sched.x1_axis,
                              sched.x2_axis, bound_rule="cdib")
    x1, x2 = sched.x1_axis, sched.x2_axis
    q = _composed(source, sched, (x1, x2, y_axis))
    w = list(sched.description_names())
    w2k, v2k = w[:-1], [w[-1]]
    r1 = cmi(q, [x1], w, [x2])
    r2 = cmi(q, [x2], v2k, w2k) + cmi(q, [x2], w2k, [x1])
    return RegionPoint(
        r1=r1, r2=r2, sum_rate=mi(q, [x1, x2], w),
        mu=mi(q, [y_axis], w),
        provenance=_stack_hash(sched.channels),
    )


def corner_points_outer(source: JointPmf, u1: Channel, u2: Channel,
                        y_axis: str = "y", x1_axis: str = "x1",
                        x2_axis: str = "x2") -> tuple[RegionPoint, ...]:
    """The four corner points induced by a fixed auxiliary pair (U1, U2).

    U1 must condition on X1 only; U2 on (U1, X2).  The relevance coordinates
    of the third and fourth corners are information differences and may be
    negative when the corner falls below the mu = 0 face.
    """
    if set(u1.input_axes) != {x1_axis}:
        raise StructureError(f"U1 must condition on {x1_axis!r} only, got {u1.input_axes}")
    if set(u2.input_axes) != {u1.output.name, x2_axis}:
        raise StructureError(
            f"U2 must condition on ({u1.output.name!r}, {x2_axis!r}), got {u2.input_axes}")
    q = compose_markov(compose_markov(source, u1), u2)
    a, b = u1.output.name, u2.output.name
    x1, x2, y = [x1_axis], [x2_axis], [y_axis]
    tag = _stack_hash((u1, u2))
    mu12 = mi(q, y, [a, b])
    q1 = RegionPoint(cmi(q, x1, [a], x2), mi(q, [a, b], x2),
                     cmi(q, x1, [a], x2) + mi(q, [a, b], x2), mu=mu12, provenance=tag)
    q2 = RegionPoint(mi(q, x1, [a]), cmi(q, x2, [b], [a]),
                     mi(q, x1, [a]) + cmi(q, x2, [b], [a]), mu=mu12, provenance=tag)
    q3 = RegionPoint(mi(q, x1, [a]), 0.0, mi(q, x1, [a]),
                     mu=mi(q, y, [a]) - cmi(q, x2, [b], [a] + y), provenance=tag)
    q4 = RegionPoint(cmi(q, x1, [a], x2), 0.0, cmi(q, x1, [a], x2),
                     mu=cmi(q, x1, [a], x2) - cmi(q, [a, b], x1 + x2, y),
                     provenance=tag)
    return q1, q2, q3, q4


# ---------------------------------------------------------------------------
# upper concave envelope
# ---------------------------------------------------------------------------


def upper_concave_envelope(points) -> list[EnvelopePoint]:
    """Upper hull of a finite point cloud by the monotone-chain construction.

    Vertices come out strictly increasing in x with strictly decreasing chord
    slopes; collinear interior points are dropped.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise ArgumentError("the envelope needs at least two points")
    if not all(np.isfinite(x) and np.isfinite(y) for x, y in pts):
        raise ArgumentError("envelope points must be finite")
    best: dict[float, float] = {}
    for x, y in pts:
        if x not in best or y > best[x]:
            best[x] = y
    xs = sorted(best)
    if len(xs) < 2:
        raise ArgumentError("envelope needs at least two distinct x values")
    hull: list[tuple[float, float]] = []
    for x in xs:
        p = (x, best[x])
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0.0:
                hull.pop()
            else:
                break
        hull.append(p)
    return [EnvelopePoint(x, y, True) for x, y in hull]


def envelope_value(envelope, x) -> np.ndarray:
    """Piecewise-linear envelope evaluation (flat extension beyond the ends)."""
    xs = np.array([p.x for p in envelope])
    ys = np.array([p.y for p in envelope])
    return np.interp(np.asarray(x, dtype=float), xs, ys)


# ---------------------------------------------------------------------------
# stochastic search for the interactive binary curve
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BucketRecord:
    """Best sampled point of one rate bucket (reproducibility artifact)."""

    rate: float
    relevance: float
    origin: str                      # "baseline:<r>" or "sample:<chunk>/<row>"
    channel: np.ndarray | None = None


_CHUNK = 8192
_BUCKETS = 64


def _int_source(model: BinaryModel) -> JointPmf:
    # (x1, x2, y1) with Y1 = X2 xor Bern(p): the hidden variable of decoder 1
    return marginalize(model.twcib_source(), ["x1", "x2", "y1"])


def _batch_entropy(j: np.ndarray, keep: set[int]) -> np.ndarray:
    axes = tuple(a for a in range(1, j.ndim) if a not in keep)
    m = j.sum(axis=axes).reshape(j.shape[0], -1)
    pos = m > 0.0
    return -np.where(pos, m * np.log2(np.where(pos, m, 1.0)), 0.0).sum(axis=1)


def _evaluate_v2_batch(q0: np.ndarray, chans: np.ndarray):
    """Rates/relevances for a batch of p(v2 | x2, v1) channel tables.

    ``q0`` is the composed (x1, x2, y1, v1) table; ``chans`` has shape
    (B, |x2|, |v1|, |v2|).  Returns (I(X2;V2|X1,V1), I(Y1;V2,X1)).
    """
    j = np.einsum("acdv,bcvw->bacdvw", q0, chans)
    # axes: 1=x1, 2=x2, 3=y1, 4=v1, 5=v2
    rate = (_batch_entropy(j, {1, 2, 4}) + _batch_entropy(j, {1, 4, 5})
            - _batch_entropy(j, {1, 2, 4, 5}) - _batch_entropy(j, {1, 4}))
    rel = (_batch_entropy(j, {3}) + _batch_entropy(j, {1, 5})
           - _batch_entropy(j, {1, 3, 5}))
    return np.maximum(rate, 0.0), np.maximum(rel, 0.0)


def _baseline_channels(v1_card: int, v2_card: int) -> tuple[np.ndarray, np.ndarray]:
    """Second-encoder strategies that ignore V1: V2 = X2 xor Bern(r).

    These are the known non-interactive achievable points (r = 0 is the full
    description, r = 1/2 carries nothing); the random search must beat them
    to demonstrate an interaction gain.
    """
    rs = np.unique(np.concatenate([np.linspace(0.0, 0.5, 96),
                                   0.5 * np.geomspace(1e-7, 1.0, 64)]))
    chans = np.zeros((len(rs), 2, v1_card, v2_card))
    for i, r in enumerate(rs):
        for x2 in (0, 1):
            chans[i, x2, :, x2] = 1.0 - r
            chans[i, x2, :, 1 - x2] = r
    return rs, chans


def search_mu_int_detailed(model: BinaryModel, r2_grid, budget: int, seed: int, *,
                           r1_rate: float | None = None, v2_card: int = 7,
                           threads: int | None = None, keep_channels: bool = False):
    """Seeded random-channel search for the interactive relevance curve.

    Fixes the first half-round description V1 at the relevance-optimal test
    channel for rate ``r1_rate`` (default: h2(q), a full first description),
    then samples ``budget`` conditional pmfs p(v2 | x2, v1) with |V2| =
    ``v2_card`` from a symmetric Dirichlet(1) per conditional slice.  Keeps
    the best relevance per rate bucket, adds the deterministic non-interactive
    baselines, and returns the upper concave envelope evaluated on
    ``r2_grid`` together with the per-bucket records.

    Deterministic for a fixed seed; samples are drawn in fixed-size chunks
    keyed by (seed, chunk index), so enlarging the budget only adds samples.
    """
    if budget < 1:
        raise ArgumentError(f"budget must be >= 1, got {budget!r}")
    grid = np.asarray(list(r2_grid), dtype=float)
    if grid.size < 1 or np.any(np.diff(grid) <= 0.0):
        raise ArgumentError("r2_grid must be nonempty and strictly increasing")
    p, q = model.p, model.q
    hq = h2(q)
    if r1_rate is None:
        r1_rate = hq
    v1 = optimal_channel(r1_rate, p, q).to_channel("x1", "v1", out_card=3)
    if v2_card > 2 * v1.output.card + 1:
        raise CardinalityError(
            f"|v2| = {v2_card} exceeds the single-letter bound {2 * v1.output.card + 1}")
    q0 = compose_markov(_int_source(model), v1).table

    edges = np.linspace(0.0, hq, _BUCKETS + 1)
    best: list[BucketRecord | None] = [None] * _BUCKETS
    # append-only point cloud: keeping every bucket-max improvement (rather
    # than only the final best) makes the envelope monotone in the budget --
    # a replaced point may have supported the hull at lower rates
    kept: list[tuple[float, float]] = []

    def absorb(rates, rels, origin, chans):
        # sequential running-max semantics per bucket: every improvement event
        # is kept, so any budget prefix produces a subset of the kept cloud
        idx = np.clip(np.searchsorted(edges, rates, side="right") - 1, 0, _BUCKETS - 1)
        for b in np.unique(idx):
            rows = np.nonzero(idx == b)[0]
            current = -np.inf if best[b] is None else best[b].relevance
            run = np.maximum.accumulate(rels[rows])
            events = rows[(rels[rows] == run) & (run > current)]
            seen = current
            for k in events:
                if rels[k] > seen:
                    seen = float(rels[k])
                    kept.append((float(rates[k]), float(rels[k])))
                    best[b] = BucketRecord(
                        float(rates[k]), float(rels[k]), origin(int(k)),
                        np.array(chans[k]) if keep_channels else None)

    base_rs, base_chans = _baseline_channels(v1.output.card, v2_card)
    rates, rels = _evaluate_v2_batch(q0, base_chans)
    absorb(rates, rels, lambda k: f"baseline:r={base_rs[k]:.6g}", base_chans)
    kept.extend(zip(map(float, rates), map(float, rels)))
    # the zero-rate point must survive bucketing: without it the envelope's
    # flat left extension would claim unachievable relevance at rate 0
    k0 = int(np.argmax(base_rs))  # r = 1/2 carries nothing
    anchor = BucketRecord(0.0 if rates[k0] < 1e-12 else float(rates[k0]),
                          float(rels[k0]), "anchor:constant",
                          np.array(base_chans[k0]) if keep_channels else None)
    kept.append((anchor.rate, anchor.relevance))

    if threads is None:
        threads = int(os.environ.get("IBREG_THREADS", "1") or 1)
    n_chunks = (budget + _CHUNK - 1) // _CHUNK

    def run_chunk(j: int):
        rng = np.random.default_rng([int(seed), j])
        block = rng.dirichlet(np.ones(v2_card), size=(_CHUNK, 2, v1.output.card))
        take = min(_CHUNK, budget - j * _CHUNK)
        block = block[:take]
        r, v = _evaluate_v2_batch(q0, block)
        return j, block, r, v

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = sorted(pool.map(run_chunk, range(n_chunks)))
    else:
        results = [run_chunk(j) for j in range(n_chunks)]
    for j, block, r, v in results:
        absorb(r, v, lambda k, j=j: f"sample:{j}/{k}", block)

    records = [anchor] + [b for b in best if b is not None]
    env = upper_concave_envelope(kept)
    vx = {round(pt.x, 12) for pt in env}
    ys = envelope_value(env, grid)
    points = [EnvelopePoint(float(x), float(y), round(float(x), 12) in vx)
              for x, y in zip(grid, ys)]
    return points, records


def search_mu_int(model: BinaryModel, r2_grid, budget: int, seed: int, *,
                  r1_rate: float | None = None, v2_card: int = 7,
                  threads: int | None = None) -> list[EnvelopePoint]:
    """Envelope of the interactive-curve search on ``r2_grid`` (see
    :func:`search_mu_int_detailed` for the sampling protocol)."""
    points, _ = search_mu_int_detailed(
        model, r2_grid, budget, seed, r1_rate=r1_rate, v2_card=v2_card,
        threads=threads)
    return points


# ---------------------------------------------------------------------------
# curve inclusion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InclusionVerdict:
    holds: bool
    tol: float
    checked: int
    worst_gap: float
    worst_rate: float | None = None
    worst_inner: float | None = None
    worst_outer: float | None = None

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "tol": self.tol,
            "checked": self.checked,
            "worst_gap": self.worst_gap,
            "worst": None if self.worst_rate is None else {
                "R": self.worst_rate,
                "inner_mu": self.worst_inner,
                "outer_mu": self.worst_outer,
            },
        }


def check_inclusion(inner: RegionCurve, outer: RegionCurve, tol: float) -> InclusionVerdict:
    """Check inner relevance <= outer relevance + tol at every common rate.

    The outer curve is linearly interpolated at the inner sample rates lying
    inside both rate ranges; the verdict carries the worst-violation point.
    """
    if len(outer.points) < 2:
        raise ComparisonError("outer curve needs at least two points to interpolate")
    o = sorted(outer.points)
    oxs = np.array([r for r, _ in o])
    oys = np.array([mu for _, mu in o])
    ixs = inner.rates()
    iys = inner.relevances()
    lo = max(float(ixs.min()), float(oxs.min()))
    hi = min(float(ixs.max()), float(oxs.max()))
    if lo > hi + 1e-12:
        raise ComparisonError(
            f"disjoint rate ranges: inner [{ixs.min()}, {ixs.max()}], "
            f"outer [{oxs.min()}, {oxs.max()}]")
    mask = (ixs >= lo - 1e-12) & (ixs <= hi + 1e-12)
    if not mask.any():
        raise ComparisonError("no inner sample falls inside the common rate range")
    gaps = iys[mask] - np.interp(ixs[mask], oxs, oys)
    k = int(np.argmax(gaps))
    worst = float(gaps[k])
    return InclusionVerdict(
        holds=bool(worst <= tol), tol=float(tol), checked=int(mask.sum()),
        worst_gap=worst,
        worst_rate=float(ixs[mask][k]),
        worst_inner=float(iys[mask][k]),
        worst_outer=float(iys[mask][k] - gaps[k]),
    )
