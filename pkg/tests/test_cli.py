import json
import math

import numpy as np
import pytest

import polygamy_lab as pl
from polygamy_lab.cli import load_state_file, main

FAST = ["--restarts", "6", "--iterations", "300"]


def _write_state(path, dims, kind, values):
    payload = {
        "dims": list(dims),
        "kind": kind,
        "data": [[float(v.real), float(v.imag)] for v in np.asarray(values).ravel()],
    }
    path.write_text(json.dumps(payload))
    return str(path)


def _bell_file(tmp_path):
    return _write_state(tmp_path / "bell.json", (2, 2), "pure", pl.bell_state().amplitudes)


# ---------------------------------------------------------------------------
# report subcommands
# ---------------------------------------------------------------------------


def test_verify_wstate_prints_gap(capsys):
    assert main(["verify-wstate", "--beta", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "gap_thm1=0.196423003396" in out
    assert "verdict=verified" in out


def test_verify_wstate_writes_file(tmp_path, capsys):
    out_file = tmp_path / "report.txt"
    assert main(["verify-wstate", "--beta", "0.5", "--out", str(out_file)]) == 0
    assert capsys.readouterr().out == ""
    assert "gap_thm1=0.196423003396" in out_file.read_text()


def test_bounds_single_term(capsys):
    assert main(["bounds", "--profile", "1.0", "--beta", "0.7"]) == 0
    out = capsys.readouterr().out
    assert "bound_thm1=1" in out
    assert "verdict=verified" in out


def test_bounds_with_lhs_and_k(capsys):
    code = main(["bounds", "--profile", "0.9", "0.3", "--beta", "0.5", "--lhs", "1.1", "--k", "0.5"])
    assert code == 0
    out = capsys.readouterr().out
    assert "k_used=0.5" in out


def test_bounds_no_sort_not_applicable(capsys):
    assert main(["bounds", "--profile", "0.5", "1.0", "--beta", "0.5", "--no-sort"]) == 0
    out = capsys.readouterr().out
    assert "verdict=not_applicable" in out
    assert "k_used=nan" in out


# ---------------------------------------------------------------------------
# sweep + lemma
# ---------------------------------------------------------------------------


def test_sweep_beta_csv(tmp_path):
    out_file = tmp_path / "sweep.csv"
    assert main(["sweep-beta", "--source", "wstate", "--steps", "101", "--out", str(out_file)]) == 0
    lines = out_file.read_text().strip().split("\n")
    assert lines[0] == "beta,lhs_pow,bound_thm1,bound_kim,bound_thm2,k_used"
    assert len(lines) == 102


def test_sweep_beta_byte_identical_reruns(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["sweep-beta", "--steps", "33", "--out"]
    assert main(argv + [str(a)]) == 0
    assert main(argv + [str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_beta_stdout(capsys):
    assert main(["sweep-beta", "--steps", "3"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("beta,")
    assert len(out.strip().split("\n")) == 4


def test_sweep_beta_profile_source(capsys):
    argv = ["sweep-beta", "--source", "profile", "--profile", "0.9", "0.4",
            "--lhs", "1.1", "--steps", "5"]
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert len(out.strip().split("\n")) == 6
    # missing --lhs is an input-validation failure
    assert main(["sweep-beta", "--source", "profile", "--profile", "0.9"]) == 3
    capsys.readouterr()


def test_sweep_beta_rejects_bad_grid(capsys):
    assert main(["sweep-beta", "--steps", "0"]) == 3
    err = capsys.readouterr().err
    assert err.startswith("error: DomainError:")
    assert main(["sweep-beta", "--beta-stop", "1.5"]) == 3


def test_lemma_check(capsys):
    assert main(["lemma-check", "--resolution", "30"]) == 0
    out = capsys.readouterr().out
    value = float(out.strip().split("min_residual=")[1])
    assert value >= -1e-12


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------


def test_random_audit_writes_csv_and_summary(tmp_path, capsys):
    out_file = tmp_path / "audit.csv"
    argv = [
        "random-audit",
        "--trials", "3",
        "--layout", "2x2x2",
        "--betas", "0.5",
        "--quiet",
        "--out", str(out_file),
    ] + FAST
    assert main(argv) == 0
    captured = capsys.readouterr()
    assert "trials=3" in captured.out
    assert "verified=" in captured.out
    lines = out_file.read_text().strip().split("\n")
    assert lines[0] == "trial,seed,lhs,E0,E1,beta,verdict,residual"
    assert len(lines) == 4


def test_random_audit_byte_identical(tmp_path, monkeypatch):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["random-audit", "--trials", "4", "--quiet", "--seed", "77"] + FAST
    assert main(argv + ["--out", str(a)]) == 0
    monkeypatch.setenv("POLYGAMY_LAB_THREADS", "3")
    assert main(argv + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_random_audit_mixed_mode_cli(tmp_path, capsys):
    out_file = tmp_path / "mixed.csv"
    argv = [
        "random-audit", "--trials", "2", "--global-ancilla", "2",
        "--betas", "0.5", "--quiet", "--out", str(out_file),
    ] + FAST
    assert main(argv) == 0
    assert "trials=2" in capsys.readouterr().out
    assert len(out_file.read_text().strip().split("\n")) == 3


def test_bounds_tol_override(capsys):
    argv = ["bounds", "--profile", "1.0", "--beta", "1.0", "--lhs", "1.05"]
    assert main(argv) == 0
    assert "verdict=inconclusive" in capsys.readouterr().out
    assert main(argv + ["--tol", "0.1"]) == 0
    assert "verdict=verified" in capsys.readouterr().out


def test_tangle_audit_cli(tmp_path, capsys):
    out_file = tmp_path / "tangle.csv"
    argv = ["tangle-audit", "--trials", "2", "--quiet", "--out", str(out_file)] + FAST
    assert main(argv) == 0
    assert "trials=2" in capsys.readouterr().out
    lines = out_file.read_text().strip().split("\n")
    assert lines[0] == "trial,seed,lhs,E0,E1,beta,verdict,residual"
    assert len(lines) == 3


# ---------------------------------------------------------------------------
# state files and compute-eoa
# ---------------------------------------------------------------------------


def test_compute_eoa_bell_file(tmp_path, capsys):
    path = _bell_file(tmp_path)
    assert main(["compute-eoa", "--input", path] + FAST) == 0
    out = capsys.readouterr().out
    value = float(out.split("value=")[1].split("\n")[0])
    assert abs(value - 1.0) <= 1e-9


def test_compute_eoa_density_file(tmp_path, capsys):
    rho = pl.w_state(3).reduced((0, 1))
    path = _write_state(tmp_path / "wred.json", (2, 2), "density", rho.matrix)
    assert main(["compute-eoa", "--input", path] + FAST) == 0
    out = capsys.readouterr().out
    value = float(out.split("value=")[1].split("\n")[0])
    assert abs(value - 2.0 / 3.0) <= 1e-3


def test_compute_eoa_tangle_measure(tmp_path, capsys):
    path = _bell_file(tmp_path)
    assert main(["compute-eoa", "--input", path, "--measure", "tangle"] + FAST) == 0
    out = capsys.readouterr().out
    value = float(out.split("value=")[1].split("\n")[0])
    assert abs(value - 1.0) <= 1e-9


def test_compute_eoa_cut_flag(tmp_path, capsys):
    psi = pl.haar_random_pure(pl.SystemLayout((2, 2, 2)), 5)
    path = _write_state(tmp_path / "ghzish.json", (2, 2, 2), "pure", psi.amplitudes)
    assert main(["compute-eoa", "--input", path, "--cut", "2"] + FAST) == 0
    out = capsys.readouterr().out
    assert "value=" in out


def test_load_state_file_round_trips(tmp_path):
    psi = pl.haar_random_pure(pl.SystemLayout((2, 3)), 4)
    path = _write_state(tmp_path / "s.json", (2, 3), "pure", psi.amplitudes)
    loaded = load_state_file(path)
    assert isinstance(loaded, pl.PureState)
    assert np.allclose(loaded.amplitudes, psi.amplitudes, atol=1e-12)


def test_state_file_validation_errors(tmp_path, capsys):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    assert main(["compute-eoa", "--input", str(bad_json)]) == 3
    assert capsys.readouterr().err.startswith("error: StateFileError:")

    short = _write_state(tmp_path / "short.json", (2, 2), "pure", np.array([1.0, 0.0]))
    assert main(["compute-eoa", "--input", short]) == 3

    unnorm = _write_state(tmp_path / "unnorm.json", (2, 2), "pure", np.array([1.0, 1.0, 0, 0]))
    assert main(["compute-eoa", "--input", unnorm]) == 3

    non_herm = _write_state(
        tmp_path / "nh.json", (2, 2), "density", np.eye(4) / 4 + 0.1 * np.eye(4, k=1)
    )
    assert main(["compute-eoa", "--input", non_herm]) == 3

    neg = _write_state(
        tmp_path / "neg.json", (2, 2), "density", np.diag([0.6, 0.5, -0.1, 0.0])
    )
    assert main(["compute-eoa", "--input", neg]) == 3

    missing = str(tmp_path / "nope.json")
    assert main(["compute-eoa", "--input", missing]) == 3


def test_state_file_repairs_tiny_defects(tmp_path):
    rho = pl.bell_state().density()
    # inject 1e-9 scale noise: inside the 1e-8 ingestion tolerance
    noisy = np.asarray(rho.matrix) + 1e-9 * np.eye(4, k=1)
    path = _write_state(tmp_path / "noisy.json", (2, 2), "density", noisy)
    loaded = load_state_file(path)
    assert isinstance(loaded, pl.DensityMatrix)
    assert loaded.eigen.eigenvalues[0] >= -1e-10


# ---------------------------------------------------------------------------
# exit codes and usage
# ---------------------------------------------------------------------------


def test_usage_errors_exit_two(capsys):
    assert main(["no-such-command"]) == 2
    assert main(["compute-eoa"]) == 2  # --input is required
    capsys.readouterr()


def test_validation_errors_exit_three(capsys):
    assert main(["verify-wstate", "--beta", "1.5"]) == 3
    err = capsys.readouterr().err
    assert err.startswith("error: DomainError:") and err.count("\n") == 1
    assert main(["random-audit", "--layout", "2xbroken"]) == 3
    assert main(["random-audit", "--betas", ""]) == 3
    assert main(["compute-eoa", "--input", "x.json", "--cut", "5"]) == 3


def test_quiet_suppresses_progress(tmp_path, capsys):
    argv = ["random-audit", "--trials", "1", "--out", str(tmp_path / "o.csv")] + FAST
    assert main(argv) == 0
    noisy = capsys.readouterr().err
    assert "auditing" in noisy
    assert main(argv + ["--quiet"]) == 0
    assert "auditing" not in capsys.readouterr().err
