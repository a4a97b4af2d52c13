"""Channel-stack evaluators, corner points, envelope, and the seeded search."""

import numpy as np
import pytest

from ibreg import (
    ArgumentError,
    Axis,
    AxisError,
    BinaryModel,
    CardinalityError,
    Channel,
    ComparisonError,
    RegionCurve,
    RoundSchedule,
    StructureError,
    check_inclusion,
    corner_points_outer,
    envelope_value,
    evaluate_cdib_inner,
    evaluate_twcib,
    f,
    g,
    h2,
    mu_d,
    mu_ed,
    search_mu_int,
    search_mu_int_detailed,
    upper_concave_envelope,
)
from ibreg.pmf import (
    compose_markov,
    conditional_mutual_information as cmi,
    entropy,
    mutual_information as mi,
)
from conftest import random_channel, random_pmf

P = Q = 0.1
MU0 = 0.31992295427172016
TOP = 0.53100440641071878
MODEL = BinaryModel(P, Q)


def bsc_stack(r, out_card_v1=2):
    v1 = Channel.bsc("x1", "v1", r, out_card_v1)
    v2 = Channel.constant([("x2", 2), ("v1", out_card_v1)], "v2")
    return RoundSchedule(1, (v1, v2))


# ---------------------------------------------------------------------------
# schedule validation
# ---------------------------------------------------------------------------


def test_schedule_accepts_valid_two_rounds(rng):
    v11 = random_channel(rng, ["x1"], [2], "v11", 3)
    v21 = random_channel(rng, ["x2", "v11"], [2, 3], "v21", 4)
    v12 = random_channel(rng, ["x1", "v11", "v21"], [2, 3, 4], "v12", 5)
    v22 = random_channel(rng, ["x2", "v11", "v21", "v12"], [2, 3, 4, 5], "v22", 7)
    sched = RoundSchedule(2, (v11, v21, v12, v22))
    assert sched.description_names() == ("v11", "v21", "v12", "v22")


def test_schedule_rejects_wrong_inputs(rng):
    v1 = random_channel(rng, ["x2"], [2], "v1", 2)  # encoder 1 must see x1
    v2 = random_channel(rng, ["x2", "v1"], [2, 2], "v2", 2)
    with pytest.raises(StructureError):
        RoundSchedule(1, (v1, v2))


def test_schedule_rejects_missing_history(rng):
    v1 = random_channel(rng, ["x1"], [2], "v1", 2)
    v2 = random_channel(rng, ["x2"], [2], "v2", 2)  # must also condition on v1
    with pytest.raises(StructureError):
        RoundSchedule(1, (v1, v2))


def test_schedule_cardinality_bounds(rng):
    # K=1: |v1| <= |x1| + 3 = 5 and |v2| <= |x2||v1| + 1
    v1 = random_channel(rng, ["x1"], [2], "v1", 6)
    v2 = random_channel(rng, ["x2", "v1"], [2, 6], "v2", 2)
    with pytest.raises(CardinalityError):
        RoundSchedule(1, (v1, v2))
    v1 = random_channel(rng, ["x1"], [2], "v1", 2)
    v2 = random_channel(rng, ["x2", "v1"], [2, 2], "v2", 6)
    with pytest.raises(CardinalityError):
        RoundSchedule(1, (v1, v2))
    RoundSchedule(1, (v1, random_channel(rng, ["x2", "v1"], [2, 2], "v2", 5)))


def test_duplicate_description_names_rejected(rng):
    # a repeated description name always collides with the conditioning set
    # of the later channel, so the error surfaces at channel construction
    with pytest.raises(AxisError):
        random_channel(rng, ["x2", "v"], [2, 2], "v", 2)


# ---------------------------------------------------------------------------
# two-way evaluator
# ---------------------------------------------------------------------------


def test_twcib_constant_channels():
    src = MODEL.twcib_source()
    v1 = Channel.constant([("x1", 2)], "v1")
    v2 = Channel.constant([("x2", 2), ("v1", 1)], "v2")
    pt = evaluate_twcib(src, RoundSchedule(1, (v1, v2)))
    assert pt.r1 == pytest.approx(0.0, abs=1e-12)
    assert pt.r2 == pytest.approx(0.0, abs=1e-12)
    assert pt.mu1 == pytest.approx(mi(src, ["y1"], ["x1"]), abs=1e-12)
    assert pt.mu2 == pytest.approx(mi(src, ["y2"], ["x2"]), abs=1e-12)


def test_twcib_identity_limit():
    src = MODEL.twcib_source()
    pt = evaluate_twcib(src, bsc_stack(0.0))
    # full description: R1 = H(X1|X2) = h2(q)
    h_x1_given_x2 = entropy(src, ["x1", "x2"]) - entropy(src, ["x2"])
    assert h_x1_given_x2 == pytest.approx(h2(Q), abs=1e-12)
    assert pt.r1 == pytest.approx(h_x1_given_x2, abs=1e-9)
    assert pt.mu2 == pytest.approx(mi(src, ["y2"], ["x1", "x2"]), abs=1e-12)


def test_twcib_bsc_matches_f_g():
    src = MODEL.twcib_source()
    for r in np.linspace(0.01, 0.5, 25):
        pt = evaluate_twcib(src, bsc_stack(float(r)))
        assert pt.r1 == pytest.approx(g(r, Q), abs=1e-9)
        assert pt.mu2 == pytest.approx(MU0 + f(r, P, Q), abs=1e-9)
        assert pt.r2 == pytest.approx(0.0, abs=1e-10)


def test_twcib_relabeling_invariance(rng):
    src = MODEL.twcib_source()
    t1 = rng.dirichlet(np.ones(3), size=2)
    t2 = rng.dirichlet(np.ones(4), size=(2, 3))
    v1 = Channel(("x1",), Axis("v1", 3), t1)
    v2 = Channel(("x2", "v1"), Axis("v2", 4), t2)
    base = evaluate_twcib(src, RoundSchedule(1, (v1, v2)))
    # permute v1's symbols consistently (output columns and downstream slices)
    perm = [2, 0, 1]
    v1p = Channel(("x1",), Axis("v1", 3), t1[:, perm])
    v2p = Channel(("x2", "v1"), Axis("v2", 4), t2[:, perm, :])
    pt = evaluate_twcib(src, RoundSchedule(1, (v1p, v2p)))
    for a, b in ((base.r1, pt.r1), (base.r2, pt.r2),
                 (base.mu1, pt.mu1), (base.mu2, pt.mu2)):
        assert a == pytest.approx(b, abs=1e-12)


def test_twcib_data_processing(rng):
    src = MODEL.twcib_source()
    cap1 = mi(src, ["y1"], ["x1", "x2"])
    cap2 = mi(src, ["y2"], ["x1", "x2"])
    for _ in range(10):
        v1 = random_channel(rng, ["x1"], [2], "v1", int(rng.integers(2, 5)))
        v2 = random_channel(rng, ["x2", "v1"], [2, v1.output.card], "v2",
                            int(rng.integers(2, 5)))
        pt = evaluate_twcib(src, RoundSchedule(1, (v1, v2)))
        assert pt.mu1 <= cap1 + 1e-10
        assert pt.mu2 <= cap2 + 1e-10


# ---------------------------------------------------------------------------
# broadcast inner evaluator
# ---------------------------------------------------------------------------


def test_cdib_constant_channels():
    src = MODEL.half_round_source()
    v1 = Channel.constant([("x1", 2)], "v1")
    v2 = Channel.constant([("x2", 2), ("v1", 1)], "v2")
    # a schedule built under the two-way bound rule is revalidated internally
    pt = evaluate_cdib_inner(src, RoundSchedule(1, (v1, v2)))
    assert (pt.r1, pt.r2, pt.sum_rate, pt.mu) == (0.0, 0.0, 0.0, 0.0)


def test_cdib_k1_matches_remark_form(rng):
    src = MODEL.half_round_source()
    for _ in range(10):
        v1 = random_channel(rng, ["x1"], [2], "v1", 3)
        v2 = random_channel(rng, ["x2", "v1"], [2, 3], "v2", 4)
        pt = evaluate_cdib_inner(src, RoundSchedule(1, (v1, v2), bound_rule="cdib"))
        q = compose_markov(compose_markov(src, v1), v2)
        assert pt.r2 == pytest.approx(cmi(q, ["x2"], ["v2"], ["v1"]), abs=1e-10)
        assert pt.r1 == pytest.approx(cmi(q, ["x1"], ["v1", "v2"], ["x2"]), abs=1e-10)
        assert pt.sum_rate >= max(pt.r1, pt.r2) - 1e-10
        assert pt.mu == pytest.approx(mi(q, ["y"], ["v1", "v2"]), abs=1e-12)


def test_cdib_sum_rate_dominates_on_random_sources(rng):
    for _ in range(10):
        src = random_pmf(rng, (2, 2, 2), names=["x1", "x2", "y"])
        v1 = random_channel(rng, ["x1"], [2], "v1", 2)
        v2 = random_channel(rng, ["x2", "v1"], [2, 2], "v2", 2)
        pt = evaluate_cdib_inner(src, RoundSchedule(1, (v1, v2), bound_rule="cdib"))
        assert pt.sum_rate >= pt.r1 - 1e-10


# ---------------------------------------------------------------------------
# corner points
# ---------------------------------------------------------------------------


def test_corner_points_constants():
    src = MODEL.half_round_source()
    u1 = Channel.constant([("x1", 2)], "u1")
    u2 = Channel.constant([("u1", 1), ("x2", 2)], "u2")
    pts = corner_points_outer(src, u1, u2)
    for pt in pts:
        assert abs(pt.r1) <= 1e-12 and abs(pt.r2) <= 1e-12 and abs(pt.mu) <= 1e-12


def test_corner_points_structure(rng):
    src = MODEL.half_round_source()
    u1 = random_channel(rng, ["x1"], [2], "u1", 3)
    u2 = random_channel(rng, ["u1", "x2"], [3, 2], "u2", 3)
    q1, q2, q3, q4 = corner_points_outer(src, u1, u2)
    assert q1.mu == q2.mu                        # shared relevance coordinate
    assert q3.r2 == 0.0 and q4.r2 == 0.0
    # independent evaluation path for the fourth corner's relevance
    q = compose_markov(compose_markov(src, u1), u2)
    expect = (cmi(q, ["x1"], ["u1"], ["x2"])
              - cmi(q, ["u1", "u2"], ["x1", "x2"], ["y"]))
    assert q4.mu == pytest.approx(expect, abs=1e-9)


def test_corner_points_reject_bad_structure(rng):
    src = MODEL.half_round_source()
    u1 = random_channel(rng, ["x2"], [2], "u1", 2)
    u2 = random_channel(rng, ["u1", "x2"], [2, 2], "u2", 2)
    with pytest.raises(StructureError):
        corner_points_outer(src, u1, u2)


# ---------------------------------------------------------------------------
# upper concave envelope
# ---------------------------------------------------------------------------


def test_envelope_collinear():
    pts = [(0.0, 0.0), (0.5, 0.5), (1.0, 1.0), (0.25, 0.25)]
    env = upper_concave_envelope(pts)
    assert [(p.x, p.y) for p in env] == [(0.0, 0.0), (1.0, 1.0)]


def test_envelope_concave_curve_keeps_all():
    xs = np.linspace(0.0, 1.0, 20)
    pts = list(zip(xs, np.sqrt(xs)))
    env = upper_concave_envelope(pts)
    assert len(env) == 20


def test_envelope_random_clouds_vs_bruteforce(rng):
    for _ in range(30):
        xs = rng.random(100)
        ys = rng.random(100)
        env = upper_concave_envelope(zip(xs, ys))
        # every point lies on or below the envelope
        assert np.all(ys <= envelope_value(env, xs) + 1e-12)
        # quadratic oracle: a point is a vertex iff no chord of the cloud
        # passes strictly above it at its abscissa
        ex = np.array([p.x for p in env])
        ey = np.array([p.y for p in env])
        assert np.all(np.diff(ex) > 0.0)
        slopes = np.diff(ey) / np.diff(ex)
        assert np.all(np.diff(slopes) < 0.0)
        for vx, vy in zip(ex, ey):
            above = 0
            for i in range(100):
                for j in range(i + 1, 100):
                    if xs[i] == xs[j]:
                        continue
                    lo, hi = sorted((xs[i], xs[j]))
                    if lo <= vx <= hi:
                        t = (vx - xs[i]) / (xs[j] - xs[i])
                        if ys[i] + t * (ys[j] - ys[i]) > vy + 1e-9:
                            above += 1
            assert above == 0


def test_envelope_idempotent(rng):
    pts = list(zip(rng.random(50), rng.random(50)))
    env1 = upper_concave_envelope(pts)
    env2 = upper_concave_envelope([(p.x, p.y) for p in env1])
    assert [(p.x, p.y) for p in env1] == [(p.x, p.y) for p in env2]


def test_envelope_argument_errors():
    with pytest.raises(ArgumentError):
        upper_concave_envelope([(0.0, 0.0)])
    with pytest.raises(ArgumentError):
        upper_concave_envelope([(0.0, 0.0), (0.0, 1.0)])
    with pytest.raises(ArgumentError):
        upper_concave_envelope([(0.0, np.nan), (1.0, 0.0)])


# ---------------------------------------------------------------------------
# seeded search
# ---------------------------------------------------------------------------


GRID = np.linspace(0.0, h2(Q), 16)


def test_search_endpoints_and_bounds():
    pts = search_mu_int(MODEL, GRID, budget=4000, seed=11)
    assert pts[0].y == pytest.approx(MU0, abs=1e-12)
    assert pts[-1].y == pytest.approx(TOP, abs=1e-10)
    for pt in pts:
        assert pt.y <= mu_ed(pt.x, P, Q) + 1e-9


def test_search_deterministic_and_thread_invariant():
    a = search_mu_int(MODEL, GRID, budget=3000, seed=5)
    b = search_mu_int(MODEL, GRID, budget=3000, seed=5)
    c = search_mu_int(MODEL, GRID, budget=3000, seed=5, threads=3)
    assert [(p.x, p.y) for p in a] == [(p.x, p.y) for p in b]
    assert [(p.x, p.y) for p in a] == [(p.x, p.y) for p in c]


def test_search_budget_monotone():
    lo = search_mu_int(MODEL, GRID, budget=2000, seed=5)
    hi = search_mu_int(MODEL, GRID, budget=4000, seed=5)
    for a, b in zip(lo, hi):
        assert b.y >= a.y - 1e-15


def test_search_records(tmp_path):
    pts, recs = search_mu_int_detailed(MODEL, GRID, budget=2000, seed=5,
                                       keep_channels=True)
    assert recs[0].origin == "anchor:constant"
    assert any(r.origin.startswith("sample:") for r in recs)
    for r in recs:
        assert r.channel is not None
        assert r.channel.shape[-1] == 7
        assert np.allclose(r.channel.sum(axis=-1), 1.0, atol=1e-12)


def test_search_argument_errors():
    with pytest.raises(ArgumentError):
        search_mu_int(MODEL, GRID, budget=0, seed=1)
    with pytest.raises(ArgumentError):
        search_mu_int(MODEL, [0.2, 0.1], budget=10, seed=1)
    with pytest.raises(CardinalityError):
        search_mu_int(MODEL, GRID, budget=10, seed=1, v2_card=9)


# ---------------------------------------------------------------------------
# inclusion checks
# ---------------------------------------------------------------------------


def _curve(method, fun, rates):
    return RegionCurve({"kind": "binary", "p": P, "q": Q}, method, None,
                       tuple((float(r), float(fun(r))) for r in rates))


def test_inclusion_self():
    rates = np.linspace(0.0, h2(Q), 40)
    c = _curve("mu_d", lambda r: mu_d(r, P, Q), rates)
    v = check_inclusion(c, c, tol=0.0)
    assert v.holds and v.worst_gap <= 0.0


def test_inclusion_mu_d_inside_mu_ed():
    rates = np.linspace(0.0, h2(Q), 80)
    inner = _curve("mu_d", lambda r: mu_d(r, P, Q), rates)
    outer = _curve("mu_ed", lambda r: mu_ed(r, P, Q), rates)
    assert check_inclusion(inner, outer, tol=1e-9).holds


def test_inclusion_violation_witness():
    rates = np.linspace(0.0, h2(Q), 80)
    inner = _curve("mu_ed", lambda r: mu_ed(r, P, Q), rates)
    outer = _curve("mu_d", lambda r: mu_d(r, P, Q), rates)
    v = check_inclusion(inner, outer, tol=1e-9)
    assert not v.holds
    assert 0.0 < v.worst_rate < h2(Q)
    assert v.worst_gap > 0.005


def test_inclusion_disjoint_ranges():
    a = _curve("mu_d", lambda r: mu_d(r, P, Q), [0.0, 0.1])
    b = _curve("mu_d", lambda r: mu_d(r, P, Q), [0.3, 0.4])
    with pytest.raises(ComparisonError):
        check_inclusion(a, b, tol=0.0)


# ---------------------------------------------------------------------------
# multi-round schedules
# ---------------------------------------------------------------------------


def test_two_round_twcib_evaluation(rng):
    src = MODEL.twcib_source()
    v11 = random_channel(rng, ["x1"], [2], "v11", 2)
    v21 = random_channel(rng, ["x2", "v11"], [2, 2], "v21", 2)
    v12 = random_channel(rng, ["x1", "v11", "v21"], [2, 2, 2], "v12", 2)
    v22 = random_channel(rng, ["x2", "v11", "v21", "v12"], [2, 2, 2, 2], "v22", 2)
    sched = RoundSchedule(2, (v11, v21, v12, v22))
    pt = evaluate_twcib(src, sched)
    # direct recomputation on the composed joint
    q = src
    for ch in sched.channels:
        q = compose_markov(q, ch)
    w = ["v11", "v21", "v12", "v22"]
    assert pt.r1 == pytest.approx(cmi(q, ["x1"], w, ["x2"]), abs=1e-12)
    assert pt.mu1 == pytest.approx(mi(q, ["y1"], w + ["x1"]), abs=1e-12)
    assert pt.mu1 <= mi(src, ["y1"], ["x1", "x2"]) + 1e-10


def test_two_round_cdib_rate_decomposition(rng):
    src = MODEL.half_round_source()
    v11 = random_channel(rng, ["x1"], [2], "v11", 2)
    v21 = random_channel(rng, ["x2", "v11"], [2, 2], "v21", 2)
    v12 = random_channel(rng, ["x1", "v11", "v21"], [2, 2, 2], "v12", 2)
    v22 = random_channel(rng, ["x2", "v11", "v21", "v12"], [2, 2, 2, 2], "v22", 2)
    sched = RoundSchedule(2, (v11, v21, v12, v22), bound_rule="cdib")
    pt = evaluate_cdib_inner(src, sched)
    q = src
    for ch in sched.channels:
        q = compose_markov(q, ch)
    w2k = ["v11", "v21", "v12"]
    expect_r2 = cmi(q, ["x2"], ["v22"], w2k) + cmi(q, ["x2"], w2k, ["x1"])
    assert pt.r2 == pytest.approx(expect_r2, abs=1e-12)
    assert pt.sum_rate == pytest.approx(mi(q, ["x1", "x2"], w2k + ["v22"]), abs=1e-12)


def test_search_with_partial_first_round():
    # an interior first half-round uses the 3-symbol time-shared description
    pts = search_mu_int(MODEL, GRID, budget=2000, seed=5, r1_rate=0.2)
    assert pts[0].y == pytest.approx(MU0, abs=1e-12)
    for pt in pts:
        assert pt.y <= mu_ed(pt.x, P, Q) + 1e-9


def test_search_threads_env(monkeypatch):
    a = search_mu_int(MODEL, GRID, budget=3000, seed=9)
    monkeypatch.setenv("IBREG_THREADS", "4")
    b = search_mu_int(MODEL, GRID, budget=3000, seed=9)
    assert [(p.x, p.y) for p in a] == [(p.x, p.y) for p in b]
