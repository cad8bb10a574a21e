import subprocess
import sys

import pytest

from mfsor.cli import EXIT_GUARD, EXIT_OK, EXIT_USAGE, main
from mfsor.harness import ExperimentConfig, run_config


def _run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_left_to_right(capsys):
    code, out, err = _run(capsys, "solve", "--dim", "1", "--res", "41", "--method", "lrgs")
    assert code == EXIT_OK
    assert "iterations=979" in out.splitlines()
    assert "seconds=" in err and "seconds" not in out


def test_solve_parallel_matches_library(capsys):
    code, out, _ = _run(capsys, "solve", "--dim", "2", "--res", "51", "--method", "pgs", "--topo", "2x2")
    row = run_config(ExperimentConfig(2, 51, "PGS", (2, 2)))
    assert code == EXIT_OK
    assert f"iterations={row.iterations}" in out.splitlines()
    assert "method=PGS(2x2)" in out


def test_zero_iterations_is_a_result(capsys):
    code, out, _ = _run(capsys, "solve", "--dim", "1", "--res", "5", "--method", "lrgs", "--max-iters", "0")
    assert code == EXIT_OK
    assert "converged=false" in out and "WARNING" in out


def test_solve_output_is_byte_identical(capsys):
    argv = ("solve", "--dim", "2", "--res", "21", "--method", "psor", "--topo", "2x2", "--omega", "1.4")
    first = _run(capsys, *argv)[1]
    second = _run(capsys, *argv)[1]
    assert first == second


def test_config_file_with_override(capsys, tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("# left sweep\ndimension=1\nresolution=41\nmethod=lrgs\n")
    code, out, _ = _run(capsys, "solve", "--config", str(path), "--max-iters", "10")
    assert code == EXIT_OK and "iterations=10" in out


@pytest.mark.parametrize("argv", [
    ("solve", "--dim", "4", "--res", "5", "--method", "lrgs"),
    ("solve", "--dim", "1", "--res", "5", "--method", "xyz"),
    ("solve", "--dim", "2", "--res", "5", "--method", "lrgs"),
    ("solve", "--dim", "1", "--res", "5", "--method", "lrgs", "--omega", "1;2;3"),
    ("solve", "--config", "/nonexistent/run.cfg"),
    ("bench", "--suite", "no-such-table"),
    ("frobnicate",),
    (),
])
def test_usage_errors(capsys, argv):
    code, out, err = _run(capsys, *argv)
    assert code == EXIT_USAGE
    assert err


def test_analyze_one_d(capsys):
    code, out, _ = _run(capsys, "analyze", "--dim", "1", "--res", "6", "--parts", "2", "--omega", "1.0")
    assert code == EXIT_OK
    rho = [l for l in out.splitlines() if l.startswith("rho(T)=")]
    assert len(rho) == 1 and rho[0].endswith("< 1: PASS")


def test_analyze_two_d_certificate(capsys, tmp_path):
    code, out, _ = _run(capsys, "analyze", "--dim", "2", "--res", "8", "--parts", "2x2", "--dump", str(tmp_path))
    assert code == EXIT_OK
    assert any(l.startswith("G1: alt-block-triangular OK") for l in out.splitlines())
    assert {p.name for p in tmp_path.iterdir()} == {"A.mtx", "G1.mtx", "G2.mtx", "G3.mtx", "G4.mtx"}


def test_analyze_guard(capsys):
    code, _, err = _run(capsys, "analyze", "--dim", "2", "--res", "70", "--parts", "2x2")
    assert code == EXIT_GUARD and "--force" in err


def test_bench_writes_tables(capsys, tmp_path):
    code, out, _ = _run(capsys, "bench", "--suite", "1d-sor-41", "--res", "41", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert "| LRSOR | 41 | 1.86887;1 | 51 |" in out
    assert (tmp_path / "1d-sor-41.csv").exists() and (tmp_path / "1d-sor-41.md").read_text() == out


def test_omega_search(capsys):
    code, out, _ = _run(capsys, "omega-search", "--dim", "1", "--res", "41", "--method", "lrsor")
    assert code == EXIT_OK
    lines = dict(l.split("=", 1) for l in out.splitlines())
    assert abs(float(lines["omega"].split(";")[0]) - 1.86887) <= 2e-3
    assert lines["iterations"] == "51"


def test_cache_bench(capsys, tmp_path):
    code, out, err = _run(capsys, "cache-bench", "--res", "9", "--parts", "1,8", "--reps", "2", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out.splitlines()[0] == "resolution,parts,topology,iterations,untimed_iterations"
    assert "factor=" in err and (tmp_path / "cache_bench.csv").exists()


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mfsor.cli", "solve", "--dim", "1", "--res", "41",
                           "--method", "rlgs"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "iterations=960" in proc.stdout.splitlines()
