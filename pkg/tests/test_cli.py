import json
import os
from pathlib import Path

import pytest

from artifact.cli import CENSUS_HEADER, main
from artifact.sweep import CSV_HEADER, SCHEMA_VERSION

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "census_d4_csv.txt": ["--format", "csv", "census", "-D", "4", "-R", "1.5"],
    "census_d3.json": ["census", "-D", "3", "-R", "1.5"],
    "sweep_3_20.csv": ["--format", "csv", "sweep", "--Dmin", "3", "--Dmax", "20", "-R", "1.0", "--no-timing"],
    "jl_table.csv": ["--format", "csv", "jl-table", "--max-s", "2"],
    "vigneras_t3.json": ["vigneras", "-t", "3", "--S", "2"],
    "hfd_d4.csv": ["--format", "csv", "hfd", "-D", "4", "-d", "5"],
    "oracle_d4.json": ["oracle-bfs", "-D", "4", "-L", "8", "-R", "1.5"],
    "volume_d7.json": ["volume", "-D", "7"],
    "heegner_d23.csv": ["--format", "csv", "heegner", "-D", "23"],
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    code, out, _ = run(CASES[name], capsys)
    assert code == 0
    path = GOLDEN / name
    if os.environ.get("UPDATE_GOLDEN"):
        path.write_text(out)
    assert out == path.read_text()


def test_sweep_csv_header(capsys):
    _, out, _ = run(CASES["sweep_3_20.csv"], capsys)
    assert out.splitlines()[0] == "D,h,vol,nR_upper,nR_exact,thin_total,ratio,wall_ms"
    assert tuple(out.splitlines()[0].split(",")) == CSV_HEADER


def test_census_csv_header(capsys):
    _, out, _ = run(CASES["census_d4_csv.txt"], capsys)
    assert tuple(out.splitlines()[0].split(",")) == CENSUS_HEADER


@pytest.mark.parametrize("argv", [
    ["field", "-D", "23"],
    ["cover-verify", "-D", "7"],
    ["thin-part", "-D", "4", "-R", "1.5"],
    ["jl-table"],
])
def test_json_has_schema_version(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == SCHEMA_VERSION
    assert doc["command"] == argv[0]


def test_sweep_is_deterministic(capsys):
    _, a, _ = run(CASES["sweep_3_20.csv"], capsys)
    _, b, _ = run(CASES["sweep_3_20.csv"], capsys)
    assert a == b


def test_sweep_resume_and_gnuplot(tmp_path, capsys):
    out = tmp_path / "rows.csv"
    plot = tmp_path / "rows.gp"
    base = ["--format", "csv", "sweep", "-R", "1.0", "--no-timing", "--output", str(out)]
    assert main(base + ["--Dmin", "3", "--Dmax", "8"]) == 0
    first = out.read_text().splitlines()
    assert [line.split(",")[0] for line in first[1:]] == ["3", "4", "7", "8"]
    assert main(base + ["--Dmin", "3", "--Dmax", "20", "--resume", "--gnuplot", str(plot)]) == 0
    full = out.read_text()
    assert full == (GOLDEN / "sweep_3_20.csv").read_text()
    script = plot.read_text()
    assert str(out) in script and "set logscale xy" in script


@pytest.mark.parametrize("argv", [
    ["--bogus", "field", "-D", "4"],
    ["field", "-D", "4", "--nope"],
    ["--kappa", "abc", "field", "-D", "4"],
    ["--format", "xml", "field", "-D", "4"],
    [],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["census", "-D", "5", "-R", "1"],
    ["census", "-D", "15", "-R", "1.5", "--mode", "exact"],
    ["hfd", "-D", "4", "-d", "-4"],
    ["hfd", "-D", "4", "-d", "2"],
    ["oracle-bfs", "-D", "23", "-L", "4", "-R", "1"],
    ["sweep", "--Dmin", "3", "--Dmax", "8", "-R", "1", "--resume"],
    ["--format", "csv", "sweep", "--Dmin", "3", "--Dmax", "8", "-R", "1", "--gnuplot", "x.gp"],
    ["vigneras"],
    ["jl-table", "--max-s", "9"],
    ["--kappa", "3", "census", "-D", "4", "-R", "1.5"],
])
def test_precondition_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith("bianchilab:")


def test_resource_ceiling_exit_3(capsys):
    assert main(["--residue-ceiling", "2", "census", "-D", "4", "-R", "2"]) == 3
    assert "resource ceiling" in capsys.readouterr().err


def test_threads_env_fallback(monkeypatch, capsys):
    monkeypatch.setenv("BIANCHILAB_THREADS", "0")
    assert main(["census", "-D", "4", "-R", "1"]) == 2
    monkeypatch.setenv("BIANCHILAB_THREADS", "2")
    assert main(["census", "-D", "4", "-R", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["total"] == 2


def test_precision_flag(capsys):
    code, out, _ = run(["--precision", "160", "volume", "-D", "4"], capsys)
    assert code == 0
    assert json.loads(out)["volume"].startswith("0.30532186472573")
