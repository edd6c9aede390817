import json
import os

import pytest

from gaugekit.cli import main
from gaugekit.reports import report_from_json, report_to_json, strip_volatile


def write_spec(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.fixture
def ball_spec(tmp_path):
    return write_spec(tmp_path, "ball.json",
                      {"kind": "set", "dim": 2, "family": "ball",
                       "params": {"radius": 1.0}})


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gauge_ball(ball_spec, capsys):
    code, out, _ = run_cli(["gauge", ball_spec, "--point", "3", "4",
                            "--samples", "200", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert abs(rep["results"]["value"] - 5.0) <= 1e-9


def test_gauge_fixture_reference(tmp_path, capsys):
    spec = write_spec(tmp_path, "dur.json",
                      {"kind": "set", "family": "fixture",
                       "params": {"name": "disk_union_ray"}})
    code, out, _ = run_cli(["gauge", spec, "--point", "2", "0",
                            "--samples", "64", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["results"]["value"] == 0.0


def test_malformed_spec_exits_3(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run_cli(["gauge", str(p), "--point", "1", "0"], capsys)
    assert code == 3
    assert "line" in err


def test_unknown_keys_rejected(tmp_path, capsys):
    spec = write_spec(tmp_path, "weird.json",
                      {"kind": "norm", "dim": 2, "family": "lp",
                       "params": {"p": 2}, "bogus": 1})
    code, _, err = run_cli(["certify", spec], capsys)
    assert code == 3 and "bogus" in err


def test_certify_rotund_norm_exit_0(tmp_path, capsys):
    spec = write_spec(tmp_path, "lp15.json",
                      {"kind": "norm", "dim": 2, "family": "lp", "params": {"p": 1.5}})
    code, out, _ = run_cli(["certify", spec, "--samples", "500", "--seed", "1",
                            "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["results"]["main_harness"]["parts"]["strictly_sub_convex"]["status"] \
        in ("Supported", "Proven")


def test_certify_l1_exit_1_with_witness(tmp_path, capsys):
    spec = write_spec(tmp_path, "lp1.json",
                      {"kind": "norm", "dim": 2, "family": "lp", "params": {"p": 1}})
    code, out, _ = run_cli(["certify", spec, "--samples", "500", "--seed", "1",
                            "--format", "json"], capsys)
    assert code == 1
    rep = json.loads(out)
    assert rep["results"]["midpoint_criterion"]["status"] == "Falsified"
    assert rep["results"]["midpoint_criterion"]["witness"] is not None


def test_certify_degenerate_funk_point_separation(tmp_path, capsys):
    spec = write_spec(tmp_path, "funk.json",
                      {"kind": "norm", "dim": 2, "family": "funk",
                       "params": {"base": {"family": "lp", "params": {"p": 2}},
                                  "drift": [1.0, 0.0]}})
    code, out, _ = run_cli(["certify", spec, "--samples", "400", "--seed", "1",
                            "--format", "json"], capsys)
    assert code == 1
    rep = json.loads(out)
    w = rep["results"]["axioms"]["point_sep"]["witness"]
    assert w is not None and abs(w["x"][0] + 1.0) < 1e-9


def test_certify_function_spec_on_cone(tmp_path, capsys):
    spec = write_spec(tmp_path, "conefn.json",
                      {"kind": "function", "dim": 2,
                       "expression": "sqrt(x1^2+x2^2)",
                       "degree": 1,
                       "domain": {"predicate": "x2 - abs(x1)", "strict": True,
                                  "flags": ["cone", "convex"]}})
    code, out, _ = run_cli(["certify", spec, "--samples", "500", "--seed", "1",
                            "--alpha", "1.5,2", "--format", "json"], capsys)
    assert code == 1  # strict sub-convexity fails on the open cone
    rep = json.loads(out)
    assert rep["results"]["cone_harness"]["bools"] == [True, True, False]


def test_fixtures_single_and_unknown(capsys):
    code, out, _ = run_cli(["fixtures", "lp(2)", "--samples", "300", "--seed", "1",
                            "--format", "json"], capsys)
    assert code == 0
    code, _, err = run_cli(["fixtures", "nope", "--samples", "100"], capsys)
    assert code == 3 and "unknown fixture" in err


def test_fixtures_truncated_phi_param(capsys):
    code, out, _ = run_cli(["fixtures", "truncated_phi_norm", "--param", "d=16",
                            "--samples", "300", "--seed", "1", "--format", "json"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["results"]["truncated_phi_norm"]["status"] == "Supported"


def test_validate_spec(tmp_path, capsys):
    spec = write_spec(tmp_path, "ok.json",
                      {"kind": "norm", "dim": 2, "family": "lp", "params": {"p": 2}})
    assert run_cli(["validate", spec], capsys)[0] == 0
    bad = write_spec(tmp_path, "bad.json", {"kind": "norm", "dim": 0, "family": "lp"})
    assert run_cli(["validate", bad], capsys)[0] == 3


def test_report_determinism(tmp_path, capsys):
    spec = write_spec(tmp_path, "lp3.json",
                      {"kind": "norm", "dim": 2, "family": "lp", "params": {"p": 3}})
    args = ["certify", spec, "--samples", "300", "--seed", "7", "--format", "json"]
    _, out1, _ = run_cli(args, capsys)
    _, out2, _ = run_cli(args, capsys)
    a = strip_volatile(report_from_json(out1))
    b = strip_volatile(report_from_json(out2))
    assert report_to_json(a) == report_to_json(b)


def test_report_round_trip(tmp_path, capsys):
    spec = write_spec(tmp_path, "lp2.json",
                      {"kind": "norm", "dim": 2, "family": "lp", "params": {"p": 2}})
    _, out, _ = run_cli(["certify", spec, "--samples", "300", "--seed", "3",
                         "--format", "json"], capsys)
    rep = report_from_json(out)
    assert report_from_json(report_to_json(rep)) == rep


def test_env_defaults_respected(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("GAUGEKIT_SEED", "99")
    monkeypatch.setenv("GAUGEKIT_SAMPLES", "123")
    spec = write_spec(tmp_path, "lp2.json",
                      {"kind": "norm", "dim": 2, "family": "lp", "params": {"p": 2}})
    _, out, _ = run_cli(["certify", spec, "--format", "json"], capsys)
    rep = json.loads(out)
    assert rep["seed"] == 99 and rep["samples"] == 123
    # explicit flags win over the environment
    _, out, _ = run_cli(["certify", spec, "--seed", "5", "--samples", "200",
                         "--format", "json"], capsys)
    rep = json.loads(out)
    assert rep["seed"] == 5 and rep["samples"] == 200


def test_text_and_csv_formats(tmp_path, capsys):
    spec = write_spec(tmp_path, "lp1.json",
                      {"kind": "norm", "dim": 2, "family": "lp", "params": {"p": 1}})
    code, out, _ = run_cli(["certify", spec, "--samples", "300", "--format", "text"], capsys)
    assert code == 1 and "Falsified" in out
    code, out, _ = run_cli(["certify", spec, "--samples", "300", "--format", "csv"], capsys)
    assert code == 1
    header = out.splitlines()[0]
    assert header == "path,status,margin,effort,note"


def test_out_file(tmp_path, capsys, ball_spec):
    target = tmp_path / "report.json"
    code, out, _ = run_cli(["gauge", ball_spec, "--point", "1", "0",
                            "--samples", "100", "--format", "json",
                            "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["command"] == "gauge"
