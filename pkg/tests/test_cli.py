import numpy as np
import pytest

from fracelliptic.cli import main


def run_cli(args):
    return main([str(a) for a in args])


def read_csv(path, skip_banner=False):
    lines = path.read_text().splitlines()
    if skip_banner:
        lines = [l for l in lines if not l.startswith("#")]
    return lines


def test_solve_writes_solution_csv(tmp_path):
    out = tmp_path / "sol.csv"
    code = run_cli(["solve", "--alpha", 0.5, "--theta", 0.5,
                    "--kappa", "1+exp(x)", "--case", "example1",
                    "--P", 256, "--out", out, "--no-banner"])
    assert code == 0
    lines = read_csv(out)
    assert lines[0] == "x,u"
    assert len(lines) == 258  # header + 257 nodes


def test_solve_classical_exact(tmp_path, capsys):
    out = tmp_path / "sol.csv"
    code = run_cli(["solve", "--alpha", 1, "--theta", 0, "--kappa", "1",
                    "--f", "2", "--P", 64, "--out", out, "--no-banner"])
    assert code == 0
    rows = np.loadtxt(out, delimiter=",", skiprows=1)
    x, u = rows[:, 0], rows[:, 1]
    assert np.max(np.abs(u - x * (1.0 - x))) <= 1e-12


def test_solve_rejects_bad_alpha(capsys):
    assert run_cli(["solve", "--alpha", 1.5, "--theta", 0.5, "--P", 64]) == 2
    err = capsys.readouterr().err
    assert "(0, 1]" in err


@pytest.mark.parametrize("args", [
    ["solve", "--alpha", 0.5, "--theta", -0.1, "--P", 64],
    ["solve", "--alpha", 0.5, "--theta", 0.5, "--P", 1],
    ["solve", "--alpha", 0.5, "--theta", 0.5, "--P", 64, "--mesh", "graded-left"],
    ["solve", "--alpha", 0.5, "--theta", 0.5, "--P", 64, "--mesh", "graded-left",
     "--gamma", 0.5],
    ["solve", "--alpha", 0.5, "--theta", 0.5, "--P", 64, "--case", "custom:nope"],
    ["solve", "--alpha", 0.5, "--theta", 0.5, "--P", 64, "--kappa", "1+*x"],
    ["study", "--alpha", 0.5, "--theta", 0.5, "--levels", "10:6"],
    ["study", "--alpha", 0.5, "--theta", 0.5, "--levels", "abc"],
])
def test_config_errors_exit_2(tmp_path, args):
    args = args + ["--out", tmp_path / "x.csv"] if args[0] != "tables" else args
    assert run_cli(args) == 2


def test_solve_nonpositive_kappa_is_numerical_failure(tmp_path):
    code = run_cli(["solve", "--alpha", 0.5, "--theta", 0.5,
                    "--kappa", "x-0.5", "--P", 16,
                    "--out", tmp_path / "x.csv"])
    assert code == 3


def test_solve_dump_matrix(tmp_path):
    out = tmp_path / "sol.csv"
    dump = tmp_path / "matrix.txt"
    code = run_cli(["solve", "--alpha", 0.5, "--theta", 1.0, "--P", 8,
                    "--out", out, "--dump-matrix", dump, "--no-banner"])
    assert code == 0
    m = np.loadtxt(dump)
    assert m.shape == (7, 7)
    # 17 significant digits survive a round trip
    from fracelliptic import OnePlusExpField, assemble_ls, uniform_mesh
    exact = assemble_ls(uniform_mesh(0, 1, 8), OnePlusExpField(), 0.5)
    assert np.max(np.abs(m - exact)) <= 1e-15 * np.max(np.abs(exact))


def test_study_csv_output(tmp_path):
    out = tmp_path / "study.csv"
    code = run_cli(["study", "--alpha", 0.75, "--theta", 0.5,
                    "--levels", "4:6", "--out", out, "--no-banner"])
    assert code == 0
    lines = read_csv(out)
    assert lines[0] == "theta,alpha,log2P,E_h,sigma_h"
    assert len(lines) == 4


def test_study_pointwise_files(tmp_path):
    out = tmp_path / "study.csv"
    code = run_cli(["study", "--alpha", 0.5, "--theta", 1.0,
                    "--levels", "4,5", "--pointwise", "--out", out,
                    "--no-banner"])
    assert code == 0
    for P in (16, 32):
        path = tmp_path / f"study_pointwise_P{P}.csv"
        lines = read_csv(path)
        assert lines[0] == "x,abs_error"
        assert len(lines) == P + 2


def test_study_markdown(tmp_path):
    out = tmp_path / "study.md"
    code = run_cli(["study", "--alpha", 0.5, "--theta", 0.0,
                    "--levels", "4:5", "--format", "markdown",
                    "--out", out, "--no-banner"])
    assert code == 0
    assert "| log2 P | E_h | sigma_h |" in out.read_text()


def test_identical_invocations_byte_identical(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run_cli(["solve", "--alpha", 0.6, "--theta", 0.3, "--P", 32,
                        "--out", out, "--no-banner"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_banner_carries_timestamp_only_in_comment(tmp_path):
    out = tmp_path / "a.csv"
    assert run_cli(["solve", "--alpha", 0.6, "--theta", 0.3, "--P", 8,
                    "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# fracelliptic")
    assert lines[1] == "x,u"


def test_oracle_check_passes_on_example1(capsys):
    code = run_cli(["oracle-check", "--alpha", 0.5, "--theta", 0.5,
                    "--samples", 9, "--tol", 1e-8])
    assert code == 0
    assert "oracle agreement OK" in capsys.readouterr().out


def test_oracle_check_custom_closed_form():
    code = run_cli(["oracle-check", "--alpha", 0.5, "--theta", 1.0,
                    "--case", "custom:2,1", "--kappa", "constant:1",
                    "--samples", 5, "--tol", 1e-11])
    assert code == 0


def test_oracle_check_detects_corrupted_tolerance(capsys):
    # a deliberately loose series tolerance must trip the oracle gate
    code = run_cli(["oracle-check", "--alpha", 0.5, "--theta", 0.5,
                    "--samples", 5, "--tol", 1e-8, "--series-tol", 1e-2])
    assert code == 4
    assert "ORACLE DISAGREEMENT" in capsys.readouterr().out


def test_tables_command_small(tmp_path):
    # table 3 with default flags is the cheapest full table; instead check
    # the CLI wiring through table 1 levels via a tiny study-equivalent:
    # run the real tables command only for table 3's CSV/MD existence.
    code = run_cli(["tables", "--table", 3, "--out-dir", tmp_path,
                    "--jobs", 1, "--no-banner"])
    assert code == 0
    csv_lines = read_csv(tmp_path / "table3.csv")
    assert csv_lines[0] == "theta,alpha,gamma,log2P,E_h,sigma_h"
    assert len(csv_lines) == 1 + 3 * 5
    assert (tmp_path / "table3.md").exists()


def test_version_flag(capsys):
    assert run_cli(["--version"]) == 0
