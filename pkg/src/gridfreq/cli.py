"""Command-line interface: simulate, tune, sweep, figure.

Exit codes: 0 success, 2 usage or scenario-file error, 3 numerical failure.
Frequencies cross this boundary in Hz (mHz for the dead-band flag); scenario
files carry per-unit values as documented in :mod:`gridfreq.scenariofile`.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .controllers import IDroop, NoStorage, VirtualInertia
from .model import Disturbance, Scenario, SimOptions, gb_reference_params, pu_disturbance
from .scenariofile import ScenarioParseError, load_scenario
from .simulate import (
    IntegrationError,
    extract_metrics,
    format_metrics,
    simulate,
    write_trajectory_csv,
)
from .sweeps import (
    SweepSpec,
    capacity_curve,
    sweep,
    vi_min_retune,
    write_sweep_csv,
)
from .tuning import (
    design_droop_from_target,
    energy_capacity_estimate,
    mv_min_exact,
    mv_min_linear,
    mv_min_from_target,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig7", "fig8", "fig9", "fig10", "fig11")

_TRAJ_STRIDE = 10  # trajectory figures are written every 10th sample (10 ms)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridfreq",
        description="Storage-based frequency control: simulation, tuning, sweeps, figure data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario file, write trajectory CSV + metrics")
    p_sim.add_argument("scenario", help="scenario file path")
    p_sim.add_argument("--out", required=True, help="trajectory CSV output path")
    p_sim.add_argument("--metrics-out", default=None, help="metrics summary path (default: <out>.metrics.txt)")
    p_sim.add_argument("--dt", type=float, default=None, help="override integration step [s]")
    p_sim.add_argument("--horizon", type=float, default=None, help="override horizon [s]")
    p_sim.add_argument("--step-gw", type=float, default=None, help="override disturbance [GW]")
    p_sim.add_argument("--step-pu", type=float, default=None, help="override disturbance [pu]")
    p_sim.add_argument("--deadband-mhz", type=float, default=None, help="override governor dead-band [mHz]")
    p_sim.add_argument("--inertia-h", type=float, default=None, help="override inertia constant [s]")
    p_sim.add_argument(
        "--freeze-secondary",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="force the secondary gain to zero for this run",
    )

    p_tune = sub.add_parser("tune", help="size the storage control for a deviation target")
    p_tune.add_argument("--target-hz", type=float, required=True, help="max steady-state deviation [Hz]")
    p_tune.add_argument("--delta-p-gw", type=float, default=1.8, help="design disturbance [GW]")
    p_tune.add_argument("--base-gw", type=float, default=32.0, help="system power base [GW]")
    p_tune.add_argument("--nominal-hz", type=float, default=60.0, help="nominal frequency [Hz]")
    p_tune.add_argument("--inertia-h", type=float, default=2.19, help="inertia constant [s]")
    p_tune.add_argument("--turbine-tau", type=float, default=1.0, help="turbine time constant [s]")
    p_tune.add_argument("--alpha-l", type=float, default=1.0, help="load sensitivity [pu]")
    p_tune.add_argument("--alpha-g", type=float, default=15.0, help="generator inverse droop [pu]")
    p_tune.add_argument("--k-i", type=float, default=0.05, help="secondary gain [1/s]")

    p_sweep = sub.add_parser("sweep", help="run a standard parameter sweep, write CSV")
    p_sweep.add_argument("kind", choices=("mv", "alpha-b", "tau-t"))
    p_sweep.add_argument("--out-dir", default=".", help="output directory")
    p_sweep.add_argument("--alpha-b", type=float, default=0.0, help="storage droop for the mv sweep [pu]")
    p_sweep.add_argument("--step-gw", type=float, default=1.8, help="disturbance [GW]")

    p_fig = sub.add_parser("figure", help="regenerate a bundled figure dataset")
    p_fig.add_argument("id", choices=FIGURE_IDS)
    p_fig.add_argument("--out-dir", default=".", help="output directory")

    return parser


# ---------------------------------------------------------------------------
# simulate


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.step_gw is not None and args.step_pu is not None:
        print("error: give --step-gw or --step-pu, not both", file=sys.stderr)
        return EXIT_USAGE

    grid = scenario.grid
    if args.inertia_h is not None:
        grid = replace(grid, inertia_h=args.inertia_h)
    if args.deadband_mhz is not None:
        grid = replace(grid, deadband_omega_db=args.deadband_mhz / 1000.0 / grid.nominal_freq)
    disturbance = scenario.disturbance
    if args.step_pu is not None:
        disturbance = replace(disturbance, step_pu=args.step_pu)
    elif args.step_gw is not None:
        disturbance = replace(disturbance, step_pu=pu_disturbance(args.step_gw, grid))
    sim = scenario.sim
    if args.dt is not None:
        sim = replace(sim, dt=args.dt)
    if args.horizon is not None:
        sim = replace(sim, horizon=args.horizon)
    if args.freeze_secondary is not None:
        sim = replace(sim, freeze_secondary=args.freeze_secondary)
    try:
        scenario = Scenario(grid=grid, controller=scenario.controller, disturbance=disturbance, sim=sim)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        traj = simulate(scenario)
    except IntegrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    out_path = Path(args.out)
    with out_path.open("w") as stream:
        write_trajectory_csv(traj, stream)
    metrics = extract_metrics(traj)
    summary = format_metrics(metrics, scenario.grid.nominal_freq)
    metrics_path = Path(args.metrics_out) if args.metrics_out else out_path.with_suffix(".metrics.txt")
    metrics_path.write_text(summary)
    print(f"wrote {out_path}")
    print(f"wrote {metrics_path}")
    print(summary, end="")
    return EXIT_OK


# ---------------------------------------------------------------------------
# tune


def _cmd_tune(args: argparse.Namespace) -> int:
    if args.target_hz == 0:
        print("error: --target-hz must be nonzero", file=sys.stderr)
        return EXIT_USAGE
    try:
        grid = gb_reference_params(
            base_power=args.base_gw,
            nominal_freq=args.nominal_hz,
            inertia_h=args.inertia_h,
            turbine_tau=args.turbine_tau,
            load_damping_alpha_l=args.alpha_l,
            gen_inv_droop_alpha_g=args.alpha_g,
            secondary_gain_k_i=args.k_i,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    delta_p = pu_disturbance(args.delta_p_gw, grid)
    target_pu = args.target_hz / grid.nominal_freq
    alpha_b = design_droop_from_target(delta_p, target_pu, grid.gen_inv_droop_alpha_g)
    tuned = IDroop.nadir_tuned(grid, alpha_b)

    print(f"design disturbance = {args.delta_p_gw:.12g} GW ({delta_p:.12g} pu)")
    print(f"target deviation = {args.target_hz:.12g} Hz ({target_pu:.12g} pu)")
    print(f"alpha_b = {alpha_b:.12g} pu" + ("  (clamped to zero)" if alpha_b == 0 else ""))
    print(f"m_v_min from target (linear rule) = {mv_min_from_target(delta_p, target_pu, grid):.12g} pu*s")
    print(f"m_v_min exact at alpha_b = {mv_min_exact(grid, alpha_b):.12g} pu*s")
    print(f"m_v_min linear at alpha_b = {mv_min_linear(grid, alpha_b):.12g} pu*s")
    print(f"lag droop tuning: nu = {tuned.nu:.12g} pu, tau_i = {tuned.tau_i:.12g} s")
    if grid.secondary_gain_k_i > 0:
        e_est = energy_capacity_estimate(alpha_b, grid.secondary_gain_k_i)
        print(f"energy capacity estimate e_b_max/delta_p = {e_est:.12g} s")
    else:
        print("energy capacity estimate e_b_max/delta_p = unbounded (k_i = 0)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep


def _transient_options(dt: float = 1e-3) -> SimOptions:
    return SimOptions(dt=dt, horizon=30.0, freeze_secondary=True)


def _cmd_sweep(args: argparse.Namespace) -> int:
    grid = gb_reference_params()
    delta_p = pu_disturbance(args.step_gw, grid)
    disturbance = Disturbance(step_pu=delta_p)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.kind == "mv":
        base = Scenario(
            grid=grid,
            controller=VirtualInertia(m_v=0.0, alpha_b=args.alpha_b),
            disturbance=disturbance,
            sim=_transient_options(),
        )
        spec = SweepSpec(base=base, parameter="controller.m_v", values=_grid_values(0.0, 150.0, 1.0))
        name, value_name = "mv", "m_v"
    elif args.kind == "alpha-b":
        base = Scenario(
            grid=grid,
            controller=VirtualInertia(m_v=0.0, alpha_b=0.0),
            disturbance=disturbance,
            sim=_transient_options(),
        )
        spec = SweepSpec(
            base=base,
            parameter="controller.alpha_b",
            values=_grid_values(0.0, 15.0, 0.25),
            retune=vi_min_retune,
        )
        name, value_name = "alpha_b", "alpha_b"
    else:
        base = Scenario(
            grid=grid,
            controller=IDroop.nadir_tuned(grid, 0.0),
            disturbance=disturbance,
            sim=_transient_options(),
        )
        spec = SweepSpec(base=base, parameter="grid.turbine_tau", values=_grid_values(0.25, 3.0, 0.05))
        name, value_name = "tau_t", "tau_t"

    points = sweep(spec)
    out_path = out_dir / f"{name}.csv"
    with out_path.open("w") as stream:
        write_sweep_csv(points, stream, value_name=value_name)
    print(f"wrote {out_path}")
    return EXIT_OK


def _grid_values(start: float, stop: float, step: float) -> list[float]:
    n = int(round((stop - start) / step))
    return [round(start + k * step, 10) for k in range(n + 1)]


# ---------------------------------------------------------------------------
# figure datasets


def _decimate(arr: np.ndarray) -> np.ndarray:
    return arr[::_TRAJ_STRIDE]


def _run(scenario: Scenario):
    return simulate(scenario)


def _fig2_rows(grid, delta_p):
    cols = ["t"]
    data = []
    for h in (4.06, 2.19):
        sc = Scenario(
            grid=replace(grid, inertia_h=h),
            controller=NoStorage(),
            disturbance=Disturbance(step_pu=delta_p),
            sim=_transient_options(),
        )
        traj = _run(sc)
        cols.append(f"omega_hz_h{str(h).replace('.', 'p')}")
        data.append(_decimate(traj.omega) * grid.nominal_freq)
    t = _decimate(traj.t)
    return cols, [t] + data


def _fig3_rows(grid, _delta_p):
    alpha_grid = _grid_values(0.0, 15.0, 0.25)
    exact = [mv_min_exact(grid, a) for a in alpha_grid]
    linear = [mv_min_linear(grid, a) for a in alpha_grid]
    return ["alpha_b", "mv_min_exact", "mv_min_linear"], [alpha_grid, exact, linear]


def _fig4_rows(grid, delta_p):
    mv_crit = mv_min_exact(grid, 0.0)
    cols = ["t"]
    data = []
    for m_v, tag in ((0.0, "mv0"), (15.0, "mv15"), (35.0, "mv35"), (mv_crit, "mv_min"), (100.0, "mv100"), (150.0, "mv150")):
        sc = Scenario(
            grid=grid,
            controller=VirtualInertia(m_v=m_v, alpha_b=0.0),
            disturbance=Disturbance(step_pu=delta_p),
            sim=_transient_options(),
        )
        traj = _run(sc)
        cols.append(f"omega_pu_{tag}")
        data.append(_decimate(traj.omega))
    return cols, [_decimate(traj.t)] + data


def _fig5_rows(grid, delta_p):
    mv_grid = _grid_values(0.0, 150.0, 1.0)
    cols = ["m_v"]
    data: list = [mv_grid]
    for alpha_b in (0.0, 5.0, 10.0):
        maxdev = []
        pbmax = []
        for m_v in mv_grid:
            sc = Scenario(
                grid=grid,
                controller=VirtualInertia(m_v=m_v, alpha_b=alpha_b),
                disturbance=Disturbance(step_pu=delta_p),
                sim=_transient_options(),
            )
            m = extract_metrics(_run(sc))
            maxdev.append(abs(m.nadir_deviation))
            pbmax.append(m.p_b_max_norm)
        tag = f"ab{int(alpha_b)}"
        cols.extend([f"max_deviation_pu_{tag}", f"p_b_max_norm_{tag}"])
        data.extend([maxdev, pbmax])
    return cols, data


def _fig7_rows(grid, delta_p):
    mv_crit = mv_min_exact(grid, 0.0)
    runs = {
        "nostorage": NoStorage(),
        "vi": VirtualInertia(m_v=mv_crit, alpha_b=0.0),
        "idroop": IDroop.nadir_tuned(grid, 0.0),
    }
    cols = ["t"]
    data = []
    t = None
    for tag, ctrl in runs.items():
        sc = Scenario(grid=grid, controller=ctrl, disturbance=Disturbance(step_pu=delta_p), sim=_transient_options())
        traj = _run(sc)
        t = _decimate(traj.t)
        cols.append(f"omega_pu_{tag}")
        data.append(_decimate(traj.omega))
        if tag != "nostorage":
            cols.extend([f"p_m_pu_{tag}", f"p_b_norm_{tag}", f"e_b_norm_{tag}"])
            data.extend(
                [_decimate(traj.p_m), _decimate(traj.p_b) / delta_p, _decimate(traj.e_b) / delta_p]
            )
    return cols, [t] + data


def _fig8_rows(grid, delta_p):
    targets = [round(v, 10) for v in np.linspace(1.875e-3, 3.75e-3, 21)]
    cols = ["delta_omega_pu", "alpha_b"]
    per_strategy = {}
    for strategy in ("droop", "vi_min", "idroop_tuned"):
        per_strategy[strategy] = capacity_curve(grid, strategy, targets, delta_p)
    alpha_col = [pt.alpha_b for pt in per_strategy["droop"]]
    data: list = [targets, alpha_col]
    for strategy in ("droop", "vi_min", "idroop_tuned"):
        pts = per_strategy[strategy]
        cols.extend([f"p_b_max_norm_{strategy}", f"e_b_max_norm_{strategy}"])
        data.extend([[pt.p_b_max_norm for pt in pts], [pt.e_b_max_norm for pt in pts]])
    return cols, data


def _fig9_rows(grid, delta_p):
    tau_grid = _grid_values(0.25, 3.0, 0.05)
    controller = IDroop.nadir_tuned(grid, 0.0)  # tuned for the nominal 1 s turbine
    maxdev = []
    for tau_t in tau_grid:
        sc = Scenario(
            grid=replace(grid, turbine_tau=tau_t),
            controller=controller,
            disturbance=Disturbance(step_pu=delta_p),
            sim=_transient_options(),
        )
        m = extract_metrics(_run(sc))
        maxdev.append(abs(m.nadir_deviation))
    return ["tau_t", "max_deviation_pu"], [tau_grid, maxdev]


def _fig10_rows(grid, delta_p):
    controller = IDroop.nadir_tuned(grid, 0.0)
    cols = ["t"]
    data = []
    for tau_t in (0.25, 0.5, 1.0, 1.5, 2.0, 3.0):
        sc = Scenario(
            grid=replace(grid, turbine_tau=tau_t),
            controller=controller,
            disturbance=Disturbance(step_pu=delta_p),
            sim=_transient_options(),
        )
        traj = _run(sc)
        cols.append(f"omega_pu_taut{str(tau_t).replace('.', 'p')}")
        data.append(_decimate(traj.omega))
    return cols, [_decimate(traj.t)] + data


def _fig11_rows(grid, delta_p):
    db_grid = replace(grid, deadband_omega_db=0.0006)
    mv_crit = mv_min_exact(grid, 0.0)
    cols = ["t"]
    data = []
    for tag, ctrl in (
        ("vi", VirtualInertia(m_v=mv_crit, alpha_b=0.0)),
        ("idroop", IDroop.nadir_tuned(grid, 0.0)),
    ):
        sc = Scenario(grid=db_grid, controller=ctrl, disturbance=Disturbance(step_pu=delta_p), sim=_transient_options())
        traj = _run(sc)
        cols.append(f"omega_pu_{tag}")
        data.append(_decimate(traj.omega))
    return cols, [_decimate(traj.t)] + data


_FIGURE_BUILDERS = {
    "fig2": _fig2_rows,
    "fig3": _fig3_rows,
    "fig4": _fig4_rows,
    "fig5": _fig5_rows,
    "fig7": _fig7_rows,
    "fig8": _fig8_rows,
    "fig9": _fig9_rows,
    "fig10": _fig10_rows,
    "fig11": _fig11_rows,
}


def _cmd_figure(args: argparse.Namespace) -> int:
    grid = gb_reference_params()
    delta_p = pu_disturbance(1.8, grid)
    cols, data = _FIGURE_BUILDERS[args.id](grid, delta_p)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_path = out_dir / f"{args.id}.csv"
    with out_path.open("w") as stream:
        stream.write(",".join(cols) + "\n")
        n_rows = len(data[0])
        for i in range(n_rows):
            stream.write(",".join(f"{col[i]:.12g}" for col in data) + "\n")
    print(f"wrote {out_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "tune":
        return _cmd_tune(args)
    if args.command == "sweep":
        return _cmd_sweep(args)
    return _cmd_figure(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
