"""CLI subcommands: validation, curve emission, reproducibility, compare."""

import hashlib
import json

import pytest

from ibreg import RegionCurve, h2, mu_d
from ibreg.cli import CurveRequest, ModelConfig, main
from ibreg.errors import ConfigError

MU0 = 0.31992295427172016
TOP = 0.53100440641071878

BINARY = {"kind": "binary", "p": 0.1, "q": 0.1}
CHAIN_A = {"kind": "gaussian-cdib-x1x2y", "rho": {"x1x2": 0.8, "x2y": 0.8}}
CHAIN_B = {"kind": "gaussian-cdib-x1yx2", "rho": {"x1y": 0.8, "x2y": 0.6}}


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


# ---------------------------------------------------------------------------
# request/model validation
# ---------------------------------------------------------------------------


def test_model_config_kinds():
    for cfg in (BINARY, CHAIN_A, CHAIN_B,
                {"kind": "gaussian-twcib",
                 "rho": {"x1x2": 0.5, "x1y1": 0.4, "x2y1": 0.8,
                         "x2y2": 0.7, "x1y2": 0.55}},
                {"kind": "discrete",
                 "pmf": {"axes": [{"name": "a", "card": 2}], "table": [0.5, 0.5]}}):
        assert ModelConfig.from_dict(cfg).kind == cfg["kind"]


def test_model_config_rejects_invalid():
    with pytest.raises(ConfigError):
        ModelConfig.from_dict({"kind": "binary", "p": 0.6, "q": 0.1})
    with pytest.raises(ConfigError):
        ModelConfig.from_dict({"kind": "nope"})
    with pytest.raises(ConfigError):
        ModelConfig.from_dict({"p": 0.1})


def test_request_validation():
    good = {"model": BINARY, "quantity": "mu_d",
            "grid": {"min": 0.0, "max": 0.4, "n": 10}}
    CurveRequest.from_dict(good)
    with pytest.raises(ConfigError):   # stochastic quantity needs seed+budget
        CurveRequest.from_dict({**good, "quantity": "mu_int"})
    with pytest.raises(ConfigError):   # deterministic quantity must not have them
        CurveRequest.from_dict({**good, "seed": 1})
    with pytest.raises(ConfigError):   # wrong model kind for the quantity
        CurveRequest.from_dict({**good, "model": CHAIN_A})
    with pytest.raises(ConfigError):
        CurveRequest.from_dict({**good, "grid": {"min": 0.4, "max": 0.0, "n": 10}})
    with pytest.raises(ConfigError):
        CurveRequest.from_dict({**good, "grid": {"min": 0.0, "max": 0.4, "n": 1}})


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def test_validate_ok(tmp_path, capsys):
    rc = main(["validate", "--model", write_json(tmp_path / "m.json", BINARY)])
    assert rc == 0
    assert json.loads(capsys.readouterr().out)["ok"] is True


def test_validate_invalid_p(tmp_path, capsys):
    bad = {"kind": "binary", "p": 0.6, "q": 0.1}
    rc = main(["validate", "--model", write_json(tmp_path / "m.json", bad)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "p" in err and "(0, 1/2)" in err


def test_curve_mu_d_endpoints(tmp_path):
    model = write_json(tmp_path / "m.json", BINARY)
    out = tmp_path / "curve.csv"
    hq = h2(0.1)
    rc = main(["curve", "mu_d", "--model", model,
               "--grid", f"0:{hq}:100", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# json-meta: sha256:")
    assert lines[1] == "x,y"
    first = lines[2].split(",")
    last = lines[-1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(MU0, abs=1e-9)
    assert float(last[1]) == pytest.approx(TOP, abs=1e-3)
    # sidecar exists, parses, and matches the embedded hash
    sidecar = (tmp_path / "curve.json").read_text()
    digest = hashlib.sha256(sidecar.strip().encode()).hexdigest()
    assert lines[0] == f"# json-meta: sha256:{digest}"
    curve = RegionCurve.from_json(sidecar)
    assert curve.method == "mu_d"
    assert curve.points[0][1] == pytest.approx(MU0, abs=1e-9)


def test_curve_reproducible_bytes(tmp_path):
    model = write_json(tmp_path / "m.json", BINARY)
    outs = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        rc = main(["curve", "mu_int", "--model", model, "--grid", "0:0.45:12",
                   "--seed", "7", "--budget", "2000", "--out", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_curve_json_format(tmp_path, capsys):
    model = write_json(tmp_path / "m.json", CHAIN_A)
    rc = main(["curve", "cdib_mu_surface", "--model", model,
               "--grid", "0:2:5", "--format", "json"])
    assert rc == 0
    curve = RegionCurve.from_json(capsys.readouterr().out)
    assert len(curve.points) == 5
    assert curve.seed is None


def test_curve_exit_codes(tmp_path, capsys):
    bad_model = write_json(tmp_path / "bad.json", {"kind": "binary", "p": 0.9, "q": 0.1})
    assert main(["curve", "mu_d", "--model", bad_model, "--grid", "0:1:5"]) == 2
    model = write_json(tmp_path / "m.json", BINARY)
    assert main(["curve", "mu_d", "--model", model, "--grid", "bad"]) == 2
    missing = str(tmp_path / "missing.json")
    assert main(["curve", "mu_d", "--model", missing, "--grid", "0:1:5"]) == 2


def test_compare_inclusion(tmp_path, capsys):
    hq = h2(0.1)
    grid = {"min": 0.0, "max": hq, "n": 40}
    req_d = write_json(tmp_path / "d.json",
                       {"model": BINARY, "quantity": "mu_d", "grid": grid})
    req_ed = write_json(tmp_path / "ed.json",
                        {"model": BINARY, "quantity": "mu_ed", "grid": grid})
    assert main(["compare", req_d, req_ed, "--tol", "1e-9"]) == 0
    v = json.loads(capsys.readouterr().out)
    assert v["holds"] is True
    # the reverse ordering is violated, with an interior witness
    assert main(["compare", req_ed, req_d, "--tol", "1e-9"]) == 1
    v = json.loads(capsys.readouterr().out)
    assert v["holds"] is False
    assert 0.0 < v["worst"]["R"] < hq


def test_compare_identical_requests(tmp_path, capsys):
    grid = {"min": 0.0, "max": 0.4, "n": 20}
    req = write_json(tmp_path / "r.json",
                     {"model": BINARY, "quantity": "mu_d", "grid": grid})
    assert main(["compare", req, req, "--tol", "0"]) == 0
    assert json.loads(capsys.readouterr().out)["worst_gap"] <= 0.0


def test_figures(tmp_path):
    rc = main(["figures", "--out", str(tmp_path / "figs"),
               "--seed", "3", "--budget", "1500"])
    assert rc == 0
    names = sorted(p.name for p in (tmp_path / "figs").iterdir())
    for want in ("fig3_mu0.15.csv", "fig3_mu0.70.csv", "fig4_inner.csv",
                 "fig4_outer.csv", "fig6_mu_d.csv", "fig6_mu_ed.csv",
                 "fig6_mu_int.csv"):
        assert want in names
        assert want.replace(".csv", ".json") in names
    # fig6 mu_d data reproduces the analytic curve
    lines = (tmp_path / "figs" / "fig6_mu_d.csv").read_text().splitlines()[2:]
    for line in lines[:5]:
        x, y = map(float, line.split(","))
        assert y == pytest.approx(mu_d(x, 0.1, 0.1), abs=1e-9)
    # fig3 trade-off curves saturate: R2 nonincreasing in R1
    rows = [tuple(map(float, ln.split(",")))
            for ln in (tmp_path / "figs" / "fig3_mu0.45.csv").read_text().splitlines()[2:]]
    r2s = [y for _, y in rows]
    assert all(b <= a + 1e-12 for a, b in zip(r2s, r2s[1:]))
    assert r2s[-1] > 0.0


def test_compare_mu_int_inside_mu_ed(tmp_path):
    hq = h2(0.1)
    grid = {"min": 0.0, "max": hq, "n": 24}
    req_int = write_json(tmp_path / "i.json",
                         {"model": BINARY, "quantity": "mu_int", "grid": grid,
                          "seed": 11, "budget": 4000})
    req_ed = write_json(tmp_path / "e.json",
                        {"model": BINARY, "quantity": "mu_ed", "grid": grid})
    assert main(["compare", req_int, req_ed, "--tol", "1e-3"]) == 0


def test_region_curve_round_trip():
    # serialization rounds to 12 significant digits; after one pass the
    # representation is a fixed point and re-reading compares equal
    c = RegionCurve(BINARY, "mu_d", None, ((0.0, MU0), (0.2, 0.41)))
    d = RegionCurve.from_json(c.to_json())
    e = RegionCurve.from_json(d.to_json())
    assert e == d
    assert d.points[0][1] == pytest.approx(MU0, abs=1e-11)


def test_compare_disjoint_ranges_exit_3(tmp_path, capsys):
    a = write_json(tmp_path / "a.json",
                   {"model": BINARY, "quantity": "mu_d",
                    "grid": {"min": 0.0, "max": 0.1, "n": 5}})
    b = write_json(tmp_path / "b.json",
                   {"model": BINARY, "quantity": "mu_d",
                    "grid": {"min": 0.3, "max": 0.4, "n": 5}})
    assert main(["compare", a, b]) == 3
    assert "disjoint" in capsys.readouterr().err
