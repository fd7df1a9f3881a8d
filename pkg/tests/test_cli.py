import csv
from pathlib import Path

import pytest

from drnsim.cli import main
from drnsim.fileio import manifest_path

DATA = Path(__file__).parent / "data"
FAST = ["--set", "region_radius=400", "--set", "lambda_c=1e-4", "--set", "lambda_d2d=1e-4"]


def _data_rows(path):
    return list(csv.reader(open(path, newline="")))[1:]


def test_validate_ok(capsys):
    assert main(["validate-config", str(DATA / "table1.cfg")]) == 0
    assert "ok" in capsys.readouterr().out


def test_validate_bad_value(capsys):
    assert main(["validate-config", str(DATA / "table1.cfg"), "--set", "delta_pseh=1.5"]) == 2
    assert "delta_pseh" in capsys.readouterr().err


def test_missing_config_named(capsys):
    assert main(["validate-config", "no/such/file.cfg"]) == 2
    assert "no/such/file.cfg" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["frobnicate"], ["run", "--bogus"], [], ["run", "--trials", "x"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 1
    assert "usage" in capsys.readouterr().err


def test_runtime_error_exit(tmp_path, capsys):
    out = tmp_path / "h.csv"
    code = main(["solve-altitude", "--threshold", "1e20", "--trials", "3", "--out", str(out), *FAST])
    assert code == 3
    assert "not bracketed" in capsys.readouterr().err


def test_run_writes_csv_and_manifest(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["run", "--trials", "3", "--seed", "4", "--out", str(out), *FAST]) == 0
    assert len(_data_rows(out)) == 2
    assert manifest_path(out).is_file()


def test_default_output_dir_from_env(tmp_path, monkeypatch):
    monkeypatch.setenv("DRNSIM_OUTPUT_DIR", str(tmp_path))
    assert main(["run", "--trials", "2", "--scenario", "eh", "--format", "json", *FAST]) == 0
    assert (tmp_path / "run.json").is_file()


def test_sweep_cardinality(tmp_path):
    out = tmp_path / "density.csv"
    assert main(["sweep", "--spec", str(DATA / "density_sweep.cfg"), "--trials", "2",
                 "--out", str(out)]) == 0
    assert len(_data_rows(out)) == 20


@pytest.mark.parametrize("jobs", ["1", "3"])
def test_rerun_reproduces_rows(tmp_path, jobs):
    out = tmp_path / "a.csv"
    assert main(["sweep", "--spec", str(DATA / "density_sweep.cfg"), "--trials", "2",
                 "--out", str(out), *FAST]) == 0
    again = tmp_path / "b.csv"
    assert main(["rerun", str(manifest_path(out)), "--out", str(again), "--jobs", jobs]) == 0
    assert again.read_bytes() == out.read_bytes()


def test_solve_altitude_table(tmp_path):
    out = tmp_path / "h.csv"
    assert main(["solve-altitude", "--threshold", "1.5e10", "--h-min", "100", "--h-max", "1500",
                 "--trials", "5", "--scenario", "eh", "--densities", "1e-4,2e-4",
                 "--out", str(out), *FAST]) == 0
    rows = _data_rows(out)
    assert [r[0] for r in rows] == ["0.0001", "0.0002"]
    assert all(100.0 <= float(r[3]) <= 1500.0 for r in rows)
