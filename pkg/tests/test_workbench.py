import json

import pytest

from quiverhecke.workbench import ConfigError, RunConfig, main

CFG_A = """
# cheap type A instance
field = Fp:13
p = 5
q = 2
type = A
n = 2
lambda = 1
m = 1:2
trunc = 4
radius = 1
"""


def _write(tmp_path, text, name="cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_run_config_validation():
    cfg = RunConfig({"field": "Fp:13", "p": 5, "q": 2, "lambda": "5",
                     "m": "5:2"})
    assert cfg.kind == "B" and cfg.n == 2
    assert cfg.m == {cfg.field.of(5): 2}
    with pytest.raises(ConfigError):
        RunConfig({"field": "Fp:13", "p": 5, "q": 2})        # no lambda
    with pytest.raises(ConfigError):
        RunConfig({"field": "Fp:13", "p": 1, "q": 2, "lambda": "1"})
    with pytest.raises(ConfigError):
        RunConfig({"field": "Fp:13", "p": 5, "q": 2, "lambda": "1",
                   "type": "C"})


def test_cli_series_and_quiver(tmp_path, capsys):
    cfg = _write(tmp_path, CFG_A)
    assert main(["--config", cfg, "series"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["ok"] and len(rep["checks"]) == 15
    assert main(["--config", cfg, "quiver"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["vertices"] and rep["arrows"]


def test_cli_dim_roundtrip_through_report(tmp_path, capsys):
    cfg = _write(tmp_path, CFG_A)
    out = str(tmp_path / "rep.json")
    assert main(["--config", cfg, "--out", out, "dim"]) == 0
    rep = json.load(open(out))
    assert rep["ok"] and rep["hecke_dim"] == 8
    assert main(["report", out]) == 0
    echoed = json.loads(capsys.readouterr().out)
    assert echoed["hecke_dim"] == 8
    # csv emission of the same report
    csv_out = str(tmp_path / "rep.csv")
    assert main(["--out", csv_out, "--format", "csv", "report", out]) == 0
    lines = open(csv_out).read().splitlines()
    assert lines[0] == "key,value"
    assert any(line.startswith("hecke_dim,8") for line in lines)


def test_cli_error_exit_codes(tmp_path, capsys):
    bad = _write(tmp_path, "field = Fp:13\np = 1\nq = 2\nlambda = 1\n")
    assert main(["--config", bad, "dim"]) == 2
    assert main(["--config", str(tmp_path / "missing"), "dim"]) == 2
    assert main(["report", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_cli_cap_exceeded(tmp_path):
    cfg = _write(tmp_path, CFG_A)
    assert main(["--config", cfg, "--cap-dim", "2", "dim"]) == 3
