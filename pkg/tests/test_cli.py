"""Command line: subcommands, exit codes, determinism.

Covers:
 - simulate on the bundled scenarios: outputs, metrics content, overrides
 - exit code 2 for usage/parse problems, 3 for numerical failure
 - tune report values for the worked 0.2 Hz example and the clamped case
 - figure datasets: fig3 content and byte-identical reruns
 - one standard sweep end to end
"""

from pathlib import Path

import pytest

from gridfreq.cli import main
from gridfreq.simulate import TRAJECTORY_CSV_HEADER

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


def _metrics_value(metrics_text, key):
    for line in metrics_text.splitlines():
        if line.startswith(key + " ="):
            return line.split("=", 1)[1].strip()
    raise KeyError(key)


# ---------------------------------------------------------------- simulate


def test_simulate_idroop_scenario(tmp_path, capsys):
    out = tmp_path / "traj.csv"
    rc = main(["simulate", str(SCENARIO_DIR / "gb-idroop.scn"), "--out", str(out)])
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == TRAJECTORY_CSV_HEADER
    assert len(lines) == 1 + 30001
    metrics = (tmp_path / "traj.metrics.txt").read_text()
    assert _metrics_value(metrics, "monotone") == "true"
    ss_hz = float(_metrics_value(metrics, "steady_state_deviation_hz"))
    assert ss_hz == pytest.approx(-0.2109, abs=2e-4)
    assert "wrote" in capsys.readouterr().out


def test_simulate_nostorage_has_nadir(tmp_path):
    out = tmp_path / "t.csv"
    rc = main(["simulate", str(SCENARIO_DIR / "gb-nostorage.scn"), "--out", str(out)])
    assert rc == 0
    metrics = (tmp_path / "t.metrics.txt").read_text()
    assert _metrics_value(metrics, "monotone") == "false"
    nadir = float(_metrics_value(metrics, "nadir_deviation_pu"))
    ss = float(_metrics_value(metrics, "steady_state_deviation_pu"))
    assert nadir < ss < 0


def test_simulate_equilibrium(tmp_path):
    out = tmp_path / "eq.csv"
    rc = main(["simulate", str(SCENARIO_DIR / "gb-equilibrium.scn"), "--out", str(out)])
    assert rc == 0
    rows = out.read_text().splitlines()[1:]
    assert all(float(r.split(",")[1]) == 0.0 for r in rows)


def test_simulate_flag_overrides_file(tmp_path):
    """Flags beat file values: doubling the step doubles the final deviation."""
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    scenario = str(SCENARIO_DIR / "gb-idroop.scn")
    assert main(["simulate", scenario, "--out", str(out1)]) == 0
    assert main(["simulate", scenario, "--out", str(out2), "--step-gw", "3.6"]) == 0
    ss1 = float(_metrics_value((tmp_path / "a.metrics.txt").read_text(), "steady_state_deviation_pu"))
    ss2 = float(_metrics_value((tmp_path / "b.metrics.txt").read_text(), "steady_state_deviation_pu"))
    assert ss2 == pytest.approx(2 * ss1, rel=1e-9)


def test_simulate_deadband_flag(tmp_path):
    """--deadband-mhz converts at the 60 Hz boundary and deepens the final value."""
    out = tmp_path / "db.csv"
    rc = main(
        ["simulate", str(SCENARIO_DIR / "gb-idroop.scn"), "--out", str(out), "--deadband-mhz", "36"]
    )
    assert rc == 0
    metrics = (tmp_path / "db.metrics.txt").read_text()
    ss = float(_metrics_value(metrics, "steady_state_deviation_pu"))
    # quasi-steady value with the offset turbine law: -(dp + a_g*w_db)/16
    assert ss == pytest.approx(-(0.05625 + 15 * 0.0006) / 16.0, rel=1e-3)


def test_simulate_missing_file(tmp_path, capsys):
    rc = main(["simulate", str(tmp_path / "nope.scn"), "--out", str(tmp_path / "o.csv")])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_simulate_parse_error_is_line_anchored(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("[grid]\ninertia_h = 2.0\nfoo = 1\n")
    rc = main(["simulate", str(bad), "--out", str(tmp_path / "o.csv")])
    assert rc == 2
    err = capsys.readouterr().err
    assert "bad.scn:3" in err and "foo" in err


def test_simulate_numerical_failure(tmp_path, capsys):
    rc = main(
        [
            "simulate",
            str(SCENARIO_DIR / "gb-idroop.scn"),
            "--out",
            str(tmp_path / "o.csv"),
            "--dt",
            "2.0",
            "--horizon",
            "400",
        ]
    )
    assert rc == 3
    assert "diverged" in capsys.readouterr().err


# -------------------------------------------------------------------- tune


def test_tune_worked_example(capsys):
    rc = main(["tune", "--target-hz", "0.2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "alpha_b = 1.875 pu" in out
    assert "m_v_min from target (linear rule) = 59.37 pu*s" in out
    assert "nu = 16.875 pu, tau_i = 1 s" in out
    assert "e_b_max/delta_p = 37.5 s" in out


def test_tune_clamps_loose_target(capsys):
    rc = main(["tune", "--target-hz", "0.5"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "alpha_b = 0 pu  (clamped to zero)" in out
    assert "m_v_min from target (linear rule) = 55.62 pu*s" in out


def test_tune_zero_target_is_usage_error(capsys):
    rc = main(["tune", "--target-hz", "0"])
    assert rc == 2
    assert "nonzero" in capsys.readouterr().err


# ------------------------------------------------------------------ figure


def test_figure_fig3_content_and_determinism(tmp_path, capsys):
    d1 = tmp_path / "run1"
    d2 = tmp_path / "run2"
    assert main(["figure", "fig3", "--out-dir", str(d1)]) == 0
    assert main(["figure", "fig3", "--out-dir", str(d2)]) == 0
    b1 = (d1 / "fig3.csv").read_bytes()
    b2 = (d2 / "fig3.csv").read_bytes()
    assert b1 == b2, "figure regeneration must be byte-identical"
    lines = b1.decode().splitlines()
    assert lines[0] == "alpha_b,mv_min_exact,mv_min_linear"
    assert len(lines) == 1 + 61  # alpha_b in [0, 15] step 0.25
    first = lines[1].split(",")
    assert float(first[1]) == pytest.approx(57.6039, rel=1e-4)
    assert float(first[2]) == pytest.approx(55.62, rel=1e-9)


def test_figure_fig2_trajectories(tmp_path):
    """The two-inertia dataset: decimated to 10 ms, deeper dip at lower H."""
    assert main(["figure", "fig2", "--out-dir", str(tmp_path)]) == 0
    lines = (tmp_path / "fig2.csv").read_text().splitlines()
    assert lines[0] == "t,omega_hz_h4p06,omega_hz_h2p19"
    assert len(lines) == 1 + 3001  # 30 s at 10 ms plus t = 0
    rows = [list(map(float, r.split(","))) for r in lines[1:]]
    low_h_nadir = min(r[2] for r in rows)
    high_h_nadir = min(r[1] for r in rows)
    assert low_h_nadir < high_h_nadir < 0


def test_figure_unknown_id(tmp_path, capsys):
    assert main(["figure", "fig6", "--out-dir", str(tmp_path)]) == 2


# ------------------------------------------------------------------- sweep


def test_sweep_tau_t(tmp_path):
    rc = main(["sweep", "tau-t", "--out-dir", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "tau_t.csv").read_text().splitlines()
    assert lines[0].startswith("tau_t,nadir_deviation,")
    assert len(lines) == 1 + 56  # 0.25 .. 3.0 step 0.05


def test_sweep_unknown_kind():
    assert main(["sweep", "bogus"]) == 2


def test_no_command_is_usage_error():
    assert main([]) == 2
