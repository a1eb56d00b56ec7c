import json

import numpy as np
import pytest
from click.testing import CliRunner

from conftest import E12
from qgelfand.cli import main
from qgelfand.linalg import matrix_to_json
from qgelfand.oml import lattice_zoo


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture()
def files(tmp_path):
    zoo = lattice_zoo()
    paths = {}

    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        paths[name] = str(p)
        return str(p)

    write("mo2.json", zoo["MO2"].to_json())
    write("b3.json", zoo["B3"].to_json())
    write("e12.json", matrix_to_json(E12))
    write("m2.json", {"ambient_dim": 2,
                      "generators": [matrix_to_json(E12)]})
    write("diag3.json", {
        "ambient_dim": 3,
        "generators": [matrix_to_json(np.diag([1.0, 2.0, 3.0]).astype(complex))],
    })
    m2p = {"ambient_dim": 2, "generators": [matrix_to_json(E12)],
           "element": matrix_to_json(np.diag([1.0, 0.0]).astype(complex))}
    write("m2_proj.json", m2p)
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    paths["bad.json"] = str(bad)
    paths["tmp"] = tmp_path
    return paths


def test_oml_verify_ok(runner, files):
    res = runner.invoke(main, ["oml", "verify", files["mo2.json"]])
    assert res.exit_code == 0
    assert json.loads(res.output)["ok"]


def test_oml_verify_bad_json(runner, files):
    res = runner.invoke(main, ["oml", "verify", files["bad.json"]])
    assert res.exit_code == 2


def test_oml_semigroup(runner, files):
    res = runner.invoke(main, ["oml", "semigroup", files["mo2.json"]])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert rep["semigroup_size"] == 18
    assert rep["recovery_isomorphic"]


def test_oml_semigroup_budget(runner, files):
    res = runner.invoke(main, ["oml", "semigroup", files["mo2.json"],
                               "--cap", "5"])
    assert res.exit_code == 3


def test_oml_boolean(runner, files):
    res = runner.invoke(main, ["oml", "boolean", files["b3.json"]])
    assert res.exit_code == 0
    assert json.loads(res.output)["boolean"]
    res = runner.invoke(main, ["oml", "boolean", files["mo2.json"]])
    assert not json.loads(res.output)["boolean"]


def test_alg_generate_and_blocks(runner, files):
    res = runner.invoke(main, ["alg", "generate", files["m2.json"]])
    assert res.exit_code == 0
    assert json.loads(res.output)["dim"] == 4
    res = runner.invoke(main, ["alg", "blocks", files["diag3.json"]])
    assert res.exit_code == 0
    blocks = json.loads(res.output)["blocks"]
    assert sorted(b["irrep_dim"] for b in blocks) == [1, 1, 1]


def test_claims_run_and_determinism(runner, files):
    cfg = files["tmp"] / "cfg.json"
    cfg.write_text(json.dumps({
        "suite": "prop9",
        "instances": ["diag3.json", "m2_proj.json"],
        "samples": 500,
        "seed": 9,
    }))
    r1 = runner.invoke(main, ["claims", "run", "--config", str(cfg)])
    r2 = runner.invoke(main, ["claims", "run", "--config", str(cfg)])
    assert r1.exit_code == 0
    assert r1.output == r2.output  # byte identical
    rep = json.loads(r1.output)
    verdicts = {(row["claim"], row["instance"]): row["verdict"]
                for row in rep["rows"]}
    assert verdicts[("prop9", "diag3")] == "holds-within-tol"
    assert verdicts[("hat_is_characteristic", "m2_proj")] == "fails"
    assert rep["ok"]  # noncommutative findings never fail the run


def test_claims_csv(runner, files):
    cfg = files["tmp"] / "cfg2.json"
    cfg.write_text(json.dumps({
        "suite": "prop1",
        "instances": ["diag3.json", "m2.json"],
        "samples": 10,
        "seed": 1,
    }))
    res = runner.invoke(main, ["claims", "run", "--config", str(cfg),
                               "--format", "csv"])
    assert res.exit_code == 0
    lines = res.output.strip().splitlines()
    assert lines[0].startswith("suite,claim,instance")
    assert len(lines) > 1


def test_claims_missing_seed(runner, files):
    cfg = files["tmp"] / "cfg3.json"
    cfg.write_text(json.dumps({
        "suite": "prop1",
        "instances": ["diag3.json"],
        "samples": 10,
    }))
    res = runner.invoke(main, ["claims", "run", "--config", str(cfg)])
    assert res.exit_code == 2


def test_claims_unknown_suite(runner, files):
    cfg = files["tmp"] / "cfg4.json"
    cfg.write_text(json.dumps({
        "suite": "nope", "instances": ["diag3.json"], "samples": 5, "seed": 1,
    }))
    res = runner.invoke(main, ["claims", "run", "--config", str(cfg)])
    assert res.exit_code == 2


def test_spectral_report(runner, files):
    plot = files["tmp"] / "plot.csv"
    res = runner.invoke(main, ["spectral", "report", files["e12.json"],
                               "--seed", "4", "--samples", "200",
                               "--plot-data", str(plot)])
    assert res.exit_code == 0
    rep = json.loads(res.output)
    assert not rep["flags"]["sigma_singleton"]
    boundary = rep["block_boundaries"][0]
    radii = [abs(complex(re, im)) for re, im in boundary]
    assert max(radii) == pytest.approx(0.5, abs=1e-8)
    header = plot.read_text().splitlines()[0]
    assert header == "kind,block,theta,support,re,im"


def test_spectral_nonsquare(runner, files):
    ns = files["tmp"] / "ns.json"
    ns.write_text(json.dumps(matrix_to_json(np.zeros((2, 3)))))
    res = runner.invoke(main, ["spectral", "report", str(ns), "--seed", "1"])
    assert res.exit_code == 2


def test_invsub(runner, files):
    res = runner.invoke(main, ["invsub", files["e12.json"], "--mode", "both",
                               "--seed", "6", "--samples", "300"])
    assert res.exit_code == 0
    rows = json.loads(res.output)["results"]
    tags = {r["case_tag"] for r in rows}
    assert tags == {"sigma-split-case", "oracle"}
    oracle = next(r for r in rows if r["case_tag"] == "oracle")
    assert oracle["invariance_defect"] <= 1e-10


def test_out_flag_writes_file(runner, files):
    out = files["tmp"] / "report.json"
    res = runner.invoke(main, ["oml", "verify", files["b3.json"],
                               "--out", str(out)])
    assert res.exit_code == 0
    assert json.loads(out.read_text())["ok"]
