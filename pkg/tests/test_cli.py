"""End-to-end tests of the command line interface."""

import json
import subprocess
import sys

import numpy as np
import pytest

from chordprop.cli import (
    EXIT_CONFIG,
    EXIT_OK,
    EXIT_REGIME,
    EXIT_VALIDATION,
    load_scenario,
    main,
    parse_scenario,
)


def _write_config(path, **overrides):
    cfg = {
        "model": {"variant": "finite_temp", "gamma": 0.1, "D": 1.0},
        "initial": [1.0, 0.0],
        "time_grid": [0.0, 2.0, 5],
        "outputs": ["energy"],
    }
    cfg.update(overrides)
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return path


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def test_parse_rejects_unknown_keys():
    with pytest.raises(Exception, match="unknown"):
        parse_scenario(
            {
                "model": {"variant": "finite_temp", "gamma": 0.1},
                "initial": [0, 0],
                "time_grid": [0, 1, 2],
                "outputs": ["energy"],
                "extra": 1,
            }
        )


def test_parse_rejects_boolean_numbers():
    with pytest.raises(Exception):
        parse_scenario(
            {
                "model": {"variant": "finite_temp", "gamma": True},
                "initial": [0, 0],
                "time_grid": [0, 1, 2],
                "outputs": ["energy"],
            }
        )


def test_load_scenario_missing_file(tmp_path):
    with pytest.raises(Exception, match="cannot read"):
        load_scenario(tmp_path / "nope.json")


def test_run_exit_codes(tmp_path):
    ok = _write_config(tmp_path / "ok.json")
    assert main(["run", str(ok), "--out", str(tmp_path / "o1"), "--no-plot"]) == EXIT_OK

    bad_variant = _write_config(
        tmp_path / "bv.json", model={"variant": "nosuch", "gamma": 0.1}
    )
    assert main(["run", str(bad_variant), "--out", str(tmp_path)]) == EXIT_CONFIG

    bad_grid = _write_config(tmp_path / "bg.json", time_grid=[0.0, 2.0, 1])
    assert main(["run", str(bad_grid), "--out", str(tmp_path)]) == EXIT_CONFIG

    missing = _write_config(tmp_path / "mk.json")
    obj = json.loads(missing.read_text())
    del obj["outputs"]
    missing.write_text(json.dumps(obj))
    assert main(["run", str(missing), "--out", str(tmp_path)]) == EXIT_CONFIG

    dup = _write_config(tmp_path / "dup.json", outputs=["energy", "energy"])
    assert main(["run", str(dup), "--out", str(tmp_path)]) == EXIT_CONFIG

    stray_window = _write_config(
        tmp_path / "sw.json", wigner_window=[-1, 1, -1, 1, 8, 8]
    )
    assert main(["run", str(stray_window), "--out", str(tmp_path)]) == EXIT_CONFIG

    regime = _write_config(
        tmp_path / "rg.json", model={"variant": "cl_under", "gamma": 1.5, "D": 1.0}
    )
    assert main(["run", str(regime), "--out", str(tmp_path)]) == EXIT_REGIME

    assert main(["run", str(tmp_path / "absent.json"), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_wigner_times_must_lie_in_grid(tmp_path):
    cfg = _write_config(
        tmp_path / "wt.json",
        outputs=["wigner_grid"],
        wigner_window=[-2, 2, -2, 2, 8, 8],
        wigner_times=[5.0],
    )
    assert main(["run", str(cfg), "--out", str(tmp_path)]) == EXIT_CONFIG


# ---------------------------------------------------------------------------
# scenario outputs
# ---------------------------------------------------------------------------


def test_run_writes_all_outputs(tmp_path):
    cfg = _write_config(
        tmp_path / "full.json",
        outputs=["energy", "trajectory", "marginals", "wigner_grid"],
        wigner_window=[-3.0, 3.0, -3.0, 3.0, 9, 8],
        wigner_times=[0.0, 2.0],
    )
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out)]) == EXIT_OK
    names = {p.name for p in out.iterdir()}
    assert {
        "energy.csv",
        "discrepancies.csv",
        "energy.png",
        "trajectory.csv",
        "trajectory.png",
        "marginals.csv",
        "marginals.png",
        "wigner_0.csv",
        "wigner_0.png",
        "wigner_2.csv",
        "wigner_2.png",
    } <= names

    lines = (out / "energy.csv").read_text().splitlines()
    assert lines[0] == "sigma,E_closed_form,E_from_state"
    assert len(lines) == 6
    # 9x8 grid points plus the header
    assert len((out / "wigner_2.csv").read_text().splitlines()) == 73


def test_no_plot_suppresses_pngs(tmp_path):
    cfg = _write_config(tmp_path / "np.json", outputs=["energy", "trajectory"])
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out), "--no-plot"]) == EXIT_OK
    names = {p.name for p in out.iterdir()}
    assert names == {"energy.csv", "discrepancies.csv", "trajectory.csv"}


def test_output_is_deterministic(tmp_path):
    cfg = _write_config(
        tmp_path / "det.json",
        model={"variant": "driven_cl", "gamma": 0.2, "D": 5.0,
               "drive": {"amplitude": 0.3, "frequency": 0.9}},
        outputs=["energy", "trajectory"],
    )
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", str(cfg), "--out", str(a), "--no-plot"]) == EXIT_OK
    assert main(["run", str(cfg), "--out", str(b), "--no-plot"]) == EXIT_OK
    for name in ("energy.csv", "trajectory.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_csv_numbers_round_trip(tmp_path):
    cfg = _write_config(tmp_path / "rt.json")
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out), "--no-plot"]) == EXIT_OK
    raw = (out / "energy.csv").read_bytes()
    assert b"\r" not in raw  # LF only
    rows = raw.decode().splitlines()[1:]
    for row in rows:
        for cell in row.split(","):
            x = float(cell)
            assert format(x, ".17g") == cell  # 17 significant digits survive


def test_minimal_two_point_grid(tmp_path):
    cfg = _write_config(tmp_path / "two.json", time_grid=[0.0, 1.0, 2])
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out), "--no-plot"]) == EXIT_OK
    assert len((out / "energy.csv").read_text().splitlines()) == 3


def test_closed_form_disagreements_are_reported(tmp_path):
    # A displaced start violates the Brownian energy shortcut's assumptions,
    # so the mismatch rows must land in discrepancies.csv.
    cfg = _write_config(
        tmp_path / "dev.json",
        model={"variant": "cl_under", "gamma": 0.1, "D": 5.0},
        initial=[2.0, 0.0],
        time_grid=[0.0, 10.0, 21],
    )
    out = tmp_path / "out"
    assert main(["run", str(cfg), "--out", str(out), "--no-plot"]) == EXIT_OK
    rows = (out / "discrepancies.csv").read_text().splitlines()
    assert len(rows) > 1
    header = rows[0].split(",")
    assert header == ["sigma", "E_closed_form", "E_from_state", "abs_diff"]


# ---------------------------------------------------------------------------
# validation command
# ---------------------------------------------------------------------------


def test_validate_maps_reports_and_passes(tmp_path):
    assert main(["validate", "maps", "--out", str(tmp_path)]) == EXIT_OK
    report = json.loads((tmp_path / "validate_maps.json").read_text())
    assert report["suite"] == "maps"
    assert report["all_pass"] is True
    names = [c["check"] for c in report["checks"]]
    assert names == [
        "group_law",
        "inverse_law",
        "determinant",
        "ode_consistency",
        "analytic_continuation",
    ]
    for c in report["checks"]:
        assert set(c) >= {"check", "max_error", "tolerance", "pass"}
        assert c["pass"] is True


def test_validate_tol_override_can_fail(tmp_path):
    # An absurdly tight override must trip the gating checks.
    assert (
        main(["validate", "maps", "--tol", "1e-30", "--out", str(tmp_path)])
        == EXIT_VALIDATION
    )
    report = json.loads((tmp_path / "validate_maps.json").read_text())
    assert report["all_pass"] is False


def test_validate_seed_changes_draws(tmp_path):
    assert main(["validate", "maps", "--seed", "1", "--out", str(tmp_path / "s1")]) == EXIT_OK
    assert main(["validate", "maps", "--seed", "2", "--out", str(tmp_path / "s2")]) == EXIT_OK
    r1 = json.loads((tmp_path / "s1" / "validate_maps.json").read_text())
    r2 = json.loads((tmp_path / "s2" / "validate_maps.json").read_text())
    e1 = [c["max_error"] for c in r1["checks"]]
    e2 = [c["max_error"] for c in r2["checks"]]
    assert e1 != e2


def test_version_flag():
    proc = subprocess.run(
        [sys.executable, "-m", "chordprop.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "chordprop" in proc.stdout


def test_console_entry_help():
    proc = subprocess.run(
        [sys.executable, "-m", "chordprop.cli", "run", "--help"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "--no-plot" in proc.stdout
