import json
import re
import subprocess
import sys

import pytest

from clustnet import cli
from clustnet.stats import CSV_COLUMNS


def run_cli(*args, cwd=None):
    return subprocess.run([sys.executable, "-m", "clustnet", *map(str, args)],
                          capture_output=True, text=True, cwd=cwd)


def read_header(text):
    return [line for line in text.splitlines() if line.startswith("#")]


SMALL = ["--n", 12, "--lambda0", 1, "--mu0", 3, "--lambda", 2, "--mu", 1,
         "--alpha", 1, "--beta", 1, "--samples", 5, "--seed", 7]


def test_parse_grid_forms():
    assert cli.parse_grid("geom:1:2:4") == [1, 2, 4, 8]
    assert cli.parse_grid("0.5,1.5") == [0.5, 1.5]
    assert cli.parse_grid([3, 4]) == [3.0, 4.0]


@pytest.mark.parametrize("spec", ["geom:1:0.5:3", "geom:1:2", "geom:0:2:3", "1,-1", "", 7])
def test_parse_grid_rejects(spec):
    with pytest.raises((cli.ConfigError, ValueError)):
        cli.parse_grid(spec)


def test_simulate_is_byte_deterministic(tmp_path):
    out = tmp_path / "a.csv"
    assert run_cli("simulate", *SMALL, "--out", out).returncode == 0
    first = out.read_bytes()
    assert run_cli("simulate", *SMALL, "--out", out).returncode == 0
    assert out.read_bytes() == first


def test_simulate_header_and_schema(tmp_path):
    out = tmp_path / "s.csv"
    summary = tmp_path / "s.json"
    res = run_cli("simulate", *SMALL, "--out", out, "--summary", summary)
    assert res.returncode == 0
    text = out.read_text()
    head = read_header(text)
    assert head[0] == "# clustnet simulate"
    cfg = json.loads(head[1][len("# config: "):])
    assert cfg["n"] == 12 and cfg["seed"] == 7 and cfg["lambda"] == 2.0
    assert head[2] == "# seed: 7"
    body = [line for line in text.splitlines() if not line.startswith("#")]
    assert body[0].split(",") == list(CSV_COLUMNS)
    assert len(body) == 6
    # resolved config is echoed on stderr
    assert json.loads(res.stderr.splitlines()[0]) == cfg
    rep = json.loads(summary.read_text())
    assert set(rep["time_average"]) >= {"e", "CL_bar", "CGL", "rate_balance"}


def test_config_file_and_flag_precedence(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"n": 9, "samples": 3, "seed": 1, "model": "independent",
                                "mu0": 2.0}))
    out = tmp_path / "o.csv"
    assert run_cli("simulate", "--config", conf, "--seed", 5, "--out", out).returncode == 0
    cfg = json.loads(read_header(out.read_text())[1][len("# config: "):])
    assert cfg["n"] == 9 and cfg["seed"] == 5 and cfg["mu0"] == 2.0
    assert cfg["lambda"] == 0.0 and cfg["mu"] == 0.0


@pytest.mark.parametrize("cfg", [
    {"n": 10, "bogus": 1},
    {"n": 1},
    {"model": "corrected", "mu": 1.0},
    {"n": 10, "samples": 0},
    {"n": 10, "mu0": -1.0},
])
def test_invalid_config_fails_without_output(tmp_path, cfg):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps(cfg))
    out = tmp_path / "never.csv"
    res = run_cli("simulate", "--config", conf, "--out", out)
    assert res.returncode != 0
    assert "error" in res.stderr
    assert not out.exists()


def test_sweep_cell_matches_simulate(tmp_path):
    cells = tmp_path / "cells"
    out = tmp_path / "sweep.csv"
    res = run_cli("sweep", "--model", "general", "--n", 10, "--mu0", 4, "--samples", 4,
                  "--lambda-grid", "2", "--mu-grid", "1", "--seed", 3,
                  "--cells-dir", cells, "--out", out)
    assert res.returncode == 0, res.stderr
    cell_csv = (cells / "cell_000_000.csv").read_text()
    cell_cfg = json.loads(read_header(cell_csv)[1][len("# config: "):])
    conf = tmp_path / "cell.json"
    conf.write_text(json.dumps({k: v for k, v in cell_cfg.items() if k != "command"}))
    again = run_cli("simulate", "--config", conf)
    assert again.returncode == 0
    assert again.stdout == cell_csv
    rows = [line for line in out.read_text().splitlines() if not line.startswith("#")]
    assert rows[0].split(",") == list(cli.SWEEP_COLUMNS)
    assert rows[1].endswith(",ok")


def test_sweep_threads_do_not_change_output(tmp_path):
    base = ["sweep", "--model", "general", "--n", 8, "--mu0", 3, "--samples", 3,
            "--lambda-grid", "geom:1:2:2", "--mu-grid", "0.5,1", "--seed", 9]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run_cli(*base, "--threads", 1, "--out", a).returncode == 0
    assert run_cli(*base, "--threads", 2, "--out", b).returncode == 0
    strip = lambda p: [ln for ln in p.read_text().splitlines() if not ln.startswith("#")]
    assert strip(a) == strip(b)


def test_sweep_svg(tmp_path):
    prefix = tmp_path / "hm"
    res = run_cli("sweep", "--model", "general", "--n", 8, "--mu0", 3, "--samples", 3,
                  "--lambda-grid", "geom:1:2:3", "--mu-grid", "geom:0.5:2:2", "--seed", 2,
                  "--svg-prefix", prefix, "--out", tmp_path / "s.csv")
    assert res.returncode == 0, res.stderr
    for name in ("e", "CL"):
        svg = (tmp_path / f"hm_{name}.svg").read_text()
        assert svg.startswith("<svg")
        assert "# clustnet sweep" not in svg and "clustnet sweep" in svg
        assert "log scale" in svg
        assert not re.search(r"\d{4}-\d{2}-\d{2}|\d{2}:\d{2}:\d{2}", svg)
    e1 = (tmp_path / "hm_e.svg").read_bytes()
    run_cli("sweep", "--model", "general", "--n", 8, "--mu0", 3, "--samples", 3,
            "--lambda-grid", "geom:1:2:3", "--mu-grid", "geom:0.5:2:2", "--seed", 2,
            "--svg-prefix", prefix, "--out", tmp_path / "s.csv")
    assert (tmp_path / "hm_e.svg").read_bytes() == e1


def test_sweep_needs_grids(tmp_path):
    res = run_cli("sweep", "--n", 8, "--out", tmp_path / "s.csv")
    assert res.returncode == 2
    assert not (tmp_path / "s.csv").exists()


def test_oracle_check_pass_and_reject(tmp_path):
    out = tmp_path / "v.json"
    res = run_cli("oracle-check", "--model", "simplified", "--n", 3, "--lambda0", 1,
                  "--mu0", 5, "--lambda", 3, "--mu", 2, "--jumps", 200000, "--out", out)
    assert res.returncode == 0, res.stderr
    rep = json.loads(out.read_text())
    assert rep["verdict"] == "pass"
    assert rep["checks"]["balance"]["verdict"] == "pass"
    res = run_cli("oracle-check", "--n", 5, "--out", out)
    assert res.returncode == 2
    assert json.loads(out.read_text())["verdict"] == "error"


def test_affiliation_outputs(tmp_path):
    out, js = tmp_path / "a.csv", tmp_path / "a.json"
    res = run_cli("affiliation", "--n", 40, "--m", 40, "--snapshots", 20, "--seed", 1,
                  "--out", out, "--json-out", js)
    assert res.returncode == 0, res.stderr
    assert read_header(out.read_text())[0] == "# clustnet affiliation"
    rep = json.loads(js.read_text())
    assert rep["mu_is_sqrt_nm"] is True
    assert set(rep["projection"]) == {"N_tri", "N_2path", "CGL"}
    assert len(rep["degree"]) == 10


def test_affiliation_weight_file_length_mismatch(tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("1\n2\n3\n")
    out = tmp_path / "a.csv"
    res = run_cli("affiliation", "--n", 5, "--m", 4, "--y-weights", f"file:{w}",
                  "--snapshots", 3, "--out", out)
    assert res.returncode == 2
    assert not out.exists()


def test_main_in_process(capsys):
    code = cli.main(["simulate", "--n", "6", "--samples", "2", "--seed", "1"])
    assert code == 0
    assert "# clustnet simulate" in capsys.readouterr().out
