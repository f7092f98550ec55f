import csv
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from cyclescope import cli
from cyclescope.hp import hp_decompose
from cyclescope.series import read_csv
from cyclescope.synth import dense_hp_trend

DATA = Path(__file__).parent / "data"
FIXTURE = Path(cli.__file__).parent / "data" / "fixture.csv"


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_analyze_fixture(tmp_path, capsys):
    assert cli.main(["analyze", str(FIXTURE), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert len(doc["cycles"]) == 3
    assert doc["manifest"]["command"] == "analyze"
    assert len(doc["manifest"]["input_sha256"]) == 64
    assert doc["manifest"]["outputs"] == ["report.json", "scan.csv", "hp_cycles.csv"]
    scan = _rows(tmp_path / "scan.csv")
    assert len(scan) == 80 and "flag_0.99" in scan[0]
    hp = _rows(tmp_path / "hp_cycles.csv")
    assert list(hp[0]) == ["date", "y", "cycle_5500", "cycle_12000", "cycle_32000", "cycle_55000"]
    assert "3 significant interval" in capsys.readouterr().out


def test_analyze_matches_golden(tmp_path):
    assert cli.main(["analyze", str(FIXTURE), "--seed", "1", "--out", str(tmp_path)]) == 0
    got = cli.dumps(cli.canonicalize(json.loads((tmp_path / "report.json").read_text())))
    assert got == (DATA / "fixture_report.json").read_text()


def test_analyze_constant(tmp_path):
    assert cli.main(["analyze", str(DATA / "const.csv"), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["cycles"] == [] and doc["intervals"] == []


def test_analyze_gap_is_input_error(tmp_path, capsys):
    assert cli.main(["analyze", str(DATA / "gapped.csv"), "--out", str(tmp_path)]) == 2
    assert "2004-03" in capsys.readouterr().err
    assert not (tmp_path / "report.json").exists()


def test_analyze_missing_file(tmp_path):
    assert cli.main(["analyze", str(tmp_path / "nope.csv"), "--out", str(tmp_path)]) == 2


def test_simulate_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["simulate", "fixture", "--n", "120", "--out", str(d)]) == 0
    assert (a / "series.csv").read_bytes() == (b / "series.csv").read_bytes()
    assert (a / "truth.json").read_bytes() == (b / "truth.json").read_bytes()


def test_simulate_seed_override(tmp_path):
    cli.main(["simulate", "fixture", "--n", "60", "--seed", "3", "--out", str(tmp_path / "a")])
    cli.main(["simulate", "fixture", "--n", "60", "--seed", "4", "--out", str(tmp_path / "b")])
    assert (tmp_path / "a/series.csv").read_text() != (tmp_path / "b/series.csv").read_text()
    assert json.loads((tmp_path / "a/truth.json").read_text())["manifest"]["seed"] == 3


def test_simulate_noiseless_closed_form(tmp_path):
    spec = {"harmonics": [[0.153, 0.2, -0.1]], "trend": [1.0]}
    (tmp_path / "spec.json").write_text(json.dumps(spec))
    assert cli.main(["simulate", str(tmp_path / "spec.json"), "--n", "48",
                     "--start", "2010-01", "--out", str(tmp_path)]) == 0
    s = read_csv(tmp_path / "series.csv")
    t = np.arange(1, 49)
    np.testing.assert_allclose(s.values, 1 + 0.2 * np.cos(0.153 * t) - 0.1 * np.sin(0.153 * t),
                               rtol=0, atol=1e-15)
    assert s.start == (2010, 1)
    truth = json.loads((tmp_path / "truth.json").read_text())
    assert truth["harmonics"][0]["m_im"] == pytest.approx(0.05)


def test_simulate_bad_spec(tmp_path):
    (tmp_path / "spec.json").write_text('{"sigma": 1, "bogus": 2}')
    assert cli.main(["simulate", str(tmp_path / "spec.json"), "--out", str(tmp_path)]) == 2


@pytest.mark.parametrize("flag", ["--oracle", "--hp", "--lambda-table", "--periods", "--seasonal"])
def test_validate_fast_suites(flag, tmp_path, capsys):
    assert cli.main(["validate", flag, "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "validate.json").read_text())
    assert doc["checks"] and all(c["passed"] for c in doc["checks"])
    assert "PASS" in capsys.readouterr().out


def test_filter_lambda_zero(tmp_path):
    out = tmp_path / "f.csv"
    assert cli.main(["filter", str(FIXTURE), "--lambda", "0", "--out", str(out)]) == 0
    rows = _rows(out)
    assert all(float(r["trend_0"]) == float(r["input"]) and float(r["cycle_0"]) == 0 for r in rows)


def test_filter_matches_dense(tmp_path):
    out = tmp_path / "f.csv"
    assert cli.main(["filter", str(FIXTURE), "--lambda", "1600", "--out", str(out)]) == 0
    x = read_csv(FIXTURE).values
    got = np.array([float(r["trend_1600"]) for r in _rows(out)])
    assert np.max(np.abs(got - dense_hp_trend(x, 1600))) < 1e-8


def test_filter_default_columns(capsys):
    assert cli.main(["filter", str(FIXTURE)]) == 0
    header = capsys.readouterr().out.splitlines()[0].split(",")
    assert header[:2] == ["date", "input"]
    assert [h for h in header if h.startswith("cycle_")] == [
        "cycle_5500", "cycle_12000", "cycle_32000", "cycle_55000"]
    x = read_csv(FIXTURE).values
    assert hp_decompose(x, 5500).trend.size == x.size


def test_canonicalize():
    assert cli.canonicalize({"a": [1 / 3, 0.0, 2]}) == {"a": [0.333333333333, 0.0, 2]}


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "cyclescope.cli", "--version"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "cyclescope" in r.stdout
