"""Acceptance suite: ten numbered criteria, one printed verdict each.

Run ``pytest tests/test_acceptance.py -s`` to see every PASS/FAIL line, or
``python tests/test_acceptance.py`` for the same as a standalone report.

Criteria 6 and 8 are implemented exactly at their stated horizons and
tolerances and are expected to fail in part; the failure messages carry the
quantitative reason (see also the companion tests noted there, which pin
the underlying physics at parameters where it is observable):

 * criterion 6: the secondary loop's slow mode has time constant
   (alpha_l + alpha_g + alpha_b) / k_i, i.e. 360..620 s for alpha_b in
   2..15, so a 1200 s run captures only ~86-96% of the limiting stored
   energy alpha_b/k_i; the 5% bound then only holds for alpha_b = 2.
   ``test_simulate.test_energy_limit_long_horizon`` shows the limit is met
   to <1% once the horizon covers the slow mode.
 * criterion 8: a governor dead-band w_db shifts the quasi-steady deviation
   by exactly w_db * alpha_g / sigma (5.625e-4 pu here, 16% of the
   no-dead-band value), so the deepest deviations of the dead-band runs
   cannot agree with the no-dead-band runs to 5%.  Monotonicity (the nadir
   elimination itself) does survive the dead-band and is asserted in
   ``test_sweeps.test_deadband_shift_bound`` with the matching shift bound.
"""

import math

import numpy as np
import pytest

from gridfreq import (
    Disturbance,
    GridParams,
    IDroop,
    NoStorage,
    Scenario,
    SimOptions,
    VirtualInertia,
    closed_loop_tf,
    extract_metrics,
    gb_reference_params,
    mv_min_exact,
    mv_min_linear,
    nadir_of_response,
    pu_disturbance,
    simulate,
    step_response,
    vi_nadir_condition,
)

GB = gb_reference_params()
DP = pu_disturbance(1.8, GB)
MV_MIN = mv_min_exact(GB, 0.0)
FROZEN = SimOptions(dt=1e-3, horizon=30.0, freeze_secondary=True)

# Golden ratio of storage power requirements (tuned lag droop / boundary
# virtual inertia), pinned before the build from the closed-form responses:
# p_b_max/dp = (a_g/sigma) * a/(a-1) * (e^-t* - e^-a t*) with a = sigma/2H
# against m_v_min/(2H + m_v_min).
PB_RATIO_GOLDEN = 0.619037


def _verdict(name: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'}  {name}"
    if detail:
        line += f"  [{detail}]"
    print("\n" + line)
    assert ok, line


def _run(controller, grid=GB, sim=FROZEN, step=DP):
    sc = Scenario(grid=grid, controller=controller, disturbance=Disturbance(step_pu=step), sim=sim)
    return simulate(sc)


def test_criterion_01_tuning_constants():
    """Minimum virtual inertia: exact and linear rules, and their gap."""
    exact0 = mv_min_exact(GB, 0.0)
    linear0 = mv_min_linear(GB, 0.0)
    ok = abs(exact0 / 57.6039 - 1.0) <= 1e-4 and abs(linear0 / 55.62 - 1.0) <= 1e-4
    worst_gap = max(
        abs(mv_min_linear(GB, ab) - mv_min_exact(GB, ab)) / mv_min_exact(GB, ab)
        for ab in np.linspace(0.0, 15.0, 151)
    )
    ok = ok and worst_gap <= 0.05
    _verdict(
        "criterion 1: tuning constants (m_v_min exact 57.6039, linear 55.62, gap <= 5%)",
        ok,
        f"exact={exact0:.6f}, linear={linear0:.6f}, worst gap={worst_gap:.4%}",
    )


def test_criterion_02_steady_state():
    """Simulated final deviation matches -delta_p/16 within 0.1%."""
    traj = _run(NoStorage())
    final = traj.omega[-1]
    expected = -DP / 16.0
    rel = abs(final - expected) / abs(expected)
    _verdict(
        "criterion 2: steady state -3.5156e-3 pu (-0.2109 Hz) within 0.1%",
        rel <= 1e-3,
        f"omega(30 s)={final:.8e} pu ({final * 60:.5f} Hz), rel err={rel:.2e}",
    )


def test_criterion_03_nadir_equivalence():
    """Algebraic condition == oracle verdict on 100 tuples; zero discriminant."""
    rng = np.random.RandomState(2027)
    checked = 0
    agree = True
    while checked < 100:
        params = GridParams(
            base_power=32.0,
            nominal_freq=60.0,
            inertia_h=rng.uniform(0.5, 10.0),
            turbine_tau=rng.uniform(0.25, 3.0),
            load_damping_alpha_l=rng.uniform(0.0, 2.0),
            gen_inv_droop_alpha_g=rng.uniform(5.0, 30.0),
            secondary_gain_k_i=0.0,
        )
        alpha_b = rng.uniform(0.0, 15.0)
        m_v = rng.uniform(0.0, 150.0)
        check = vi_nadir_condition(params, alpha_b, m_v)
        scale = params.load_damping_alpha_l + params.gen_inv_droop_alpha_g + alpha_b
        if abs(check.margin) <= 1e-6 * scale:
            continue  # boundary slack
        lti = closed_loop_tf(params, VirtualInertia(m_v=m_v, alpha_b=alpha_b))
        monotone = nadir_of_response(lti, DP) is None
        agree = agree and (monotone == check.eliminated)
        checked += 1

    worst_disc = 0.0
    for _ in range(100):
        params = GridParams(
            base_power=32.0,
            nominal_freq=60.0,
            inertia_h=rng.uniform(0.5, 10.0),
            turbine_tau=rng.uniform(0.25, 3.0),
            load_damping_alpha_l=rng.uniform(0.0, 2.0),
            gen_inv_droop_alpha_g=rng.uniform(5.0, 30.0),
            secondary_gain_k_i=0.0,
        )
        alpha_b = rng.uniform(0.0, 15.0)
        m_v = mv_min_exact(params, alpha_b)
        if m_v < 0:
            continue
        m = 2.0 * params.inertia_h + m_v
        tau = params.turbine_tau
        a_tilde = params.load_damping_alpha_l + alpha_b
        disc = (tau * a_tilde + m) ** 2 - 4.0 * m * tau * (a_tilde + params.gen_inv_droop_alpha_g)
        worst_disc = max(worst_disc, abs(disc))

    ok = agree and worst_disc <= 1e-9
    _verdict(
        "criterion 3: nadir-elimination condition == oracle verdict (100 tuples), critical damping",
        ok,
        f"agreement={agree}, worst |discriminant| at boundary={worst_disc:.2e}",
    )


def test_criterion_04_first_order_response():
    """Tuned lag droop: -(dp/16)(1 - e^{-t/0.27375}), <= 1e-4 pu, monotone."""
    traj = _run(IDroop.nadir_tuned(GB, 0.0))
    ref = -(DP / 16.0) * (1.0 - np.exp(-traj.t / 0.27375))
    err = float(np.max(np.abs(traj.omega - ref)))
    mono = extract_metrics(traj).monotone
    _verdict(
        "criterion 4: tuned lag droop is first order (<= 1e-4 pu) and monotone",
        err <= 1e-4 and mono,
        f"max err={err:.2e} pu, monotone={mono}",
    )


def test_criterion_05_power_capacity_advantage():
    """Power requirement ratio lag-droop/virtual-inertia in [0.50, 0.70]."""
    m_id = extract_metrics(_run(IDroop.nadir_tuned(GB, 0.0)))
    m_vi = extract_metrics(_run(VirtualInertia(m_v=MV_MIN, alpha_b=0.0)))
    ratio = m_id.p_b_max_norm / m_vi.p_b_max_norm
    ok = 0.50 <= ratio <= 0.70 and abs(ratio - PB_RATIO_GOLDEN) <= 1e-3
    _verdict(
        "criterion 5: storage power ratio in [0.50, 0.70], golden 0.6190",
        ok,
        f"p_b_max lag droop={m_id.p_b_max_norm:.6f}, virtual inertia={m_vi.p_b_max_norm:.6f}, "
        f"ratio={ratio:.6f}",
    )


def test_criterion_06_energy_capacity():
    """e_b_max_norm == alpha_b/k_i within 5%, horizon 1200 s, both strategies.

    Expected to fail for alpha_b >= 5: the secondary slow mode's time
    constant is (16 + alpha_b)/k_i = 420..620 s, so 1200 s truncates the
    energy integral by 5.7..14.4%.  The limit itself is exact; see
    test_simulate.test_energy_limit_long_horizon.
    """
    sim = SimOptions(dt=1e-2, horizon=1200.0)
    k_i = GB.secondary_gain_k_i
    failures = []
    details = []
    for alpha_b in (2.0, 5.0, 10.0, 15.0):
        for tag, controller in (
            ("idroop", IDroop.nadir_tuned(GB, alpha_b)),
            ("vi_min", VirtualInertia(m_v=mv_min_exact(GB, alpha_b), alpha_b=alpha_b)),
        ):
            m = extract_metrics(_run(controller, sim=sim))
            expected = alpha_b / k_i
            rel = (m.e_b_max_norm - expected) / expected
            details.append(f"{tag} ab={alpha_b:g}: {m.e_b_max_norm:.1f}/{expected:.0f} ({rel:+.1%})")
            if abs(rel) > 0.05:
                failures.append(f"{tag} ab={alpha_b:g} off by {rel:+.1%}")
    _verdict(
        "criterion 6: e_b_max/delta_p == alpha_b/k_i within 5% at horizon 1200 s",
        not failures,
        "; ".join(details),
    )


def test_criterion_07_turbine_robustness():
    """Tuned lag droop, tau_i = 1 s: flat below tau_T = 1 s, rising above."""
    controller = IDroop.nadir_tuned(GB, 0.0)
    dev = {}
    for tau_t in (0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0):
        grid = gb_reference_params(turbine_tau=tau_t)
        dev[tau_t] = abs(extract_metrics(_run(controller, grid=grid)).nadir_deviation)
    flat = [dev[t] for t in (0.25, 0.5, 0.75, 1.0)]
    spread = max(flat) - min(flat)
    rising = dev[1.0] < dev[1.5] < dev[2.0] < dev[3.0]
    _verdict(
        "criterion 7: max deviation flat (<= 1e-5) for tau_T <= 1 s, strictly rising beyond",
        spread <= 1e-5 and rising,
        f"spread={spread:.2e}, deviations={[f'{dev[t]:.6e}' for t in sorted(dev)]}",
    )


def test_criterion_08_deadband_resilience():
    """36 mHz dead-band: tunings stay monotone; nadirs within 5% of no-dead-band.

    The monotonicity half holds; the 5% half cannot: the dead-band offsets
    the quasi-steady deviation by w_db*alpha_g/sigma = 5.625e-4 pu, 16% of
    the 3.5156e-3 pu no-dead-band value, identically for both laws.  The
    shift itself is bounded and tested in test_sweeps.test_deadband_shift_bound.
    """
    grid_db = gb_reference_params(deadband_omega_db=0.0006)
    failures = []
    details = []
    for tag, controller in (
        ("vi_min", VirtualInertia(m_v=MV_MIN, alpha_b=0.0)),
        ("idroop", IDroop.nadir_tuned(GB, 0.0)),
    ):
        plain = extract_metrics(simulate(Scenario(GB, controller, Disturbance(step_pu=DP), FROZEN)))
        withdb = extract_metrics(
            simulate(Scenario(grid_db, controller, Disturbance(step_pu=DP), FROZEN)),
            monotone_tol=1e-5,
        )
        rel = abs(withdb.nadir_deviation - plain.nadir_deviation) / abs(plain.nadir_deviation)
        details.append(f"{tag}: monotone={withdb.monotone}, nadir shift={rel:+.1%}")
        if not withdb.monotone:
            failures.append(f"{tag} lost monotonicity")
        if rel > 0.05:
            failures.append(f"{tag} nadir moved {rel:+.1%}")
    _verdict(
        "criterion 8: dead-band keeps tunings monotone and nadirs within 5%",
        not failures,
        "; ".join(details),
    )


def test_criterion_09_integrator_validity():
    """RK4 vs closed form <= 1e-6 pu on linear scenarios; dt-halving <= 1e-8."""
    controllers = [
        NoStorage(),
        VirtualInertia(m_v=MV_MIN, alpha_b=0.0),
        VirtualInertia(m_v=100.0, alpha_b=5.0),
        IDroop.nadir_tuned(GB, 0.0),
        IDroop.nadir_tuned(GB, 15.0),
    ]
    worst = 0.0
    for controller in controllers:
        traj = _run(controller)
        ref = step_response(closed_loop_tf(GB, controller), DP, traj.t)
        worst = max(worst, float(np.max(np.abs(traj.omega - ref))))
    coarse = extract_metrics(_run(NoStorage())).nadir_deviation
    fine = extract_metrics(
        _run(NoStorage(), sim=SimOptions(dt=5e-4, horizon=30.0, freeze_secondary=True))
    ).nadir_deviation
    shift = abs(coarse - fine)
    _verdict(
        "criterion 9: integrator matches the oracle (<= 1e-6 pu); halving dt moves nadir <= 1e-8",
        worst <= 1e-6 and shift <= 1e-8,
        f"worst |sim - oracle|={worst:.2e} pu, nadir shift={shift:.2e} pu",
    )


def test_criterion_10_rocof_ordering():
    """Initial RoCoF: dp/(2H) for the lag droop > dp/(2H+m_v) for VI, 4 figures."""
    m_id = extract_metrics(_run(IDroop.nadir_tuned(GB, 0.0)))
    m_vi = extract_metrics(_run(VirtualInertia(m_v=MV_MIN, alpha_b=0.0)))
    id_expected = -DP / (2.0 * GB.inertia_h)
    vi_expected = -DP / (2.0 * GB.inertia_h + MV_MIN)
    ok = (
        abs(m_id.rocof_initial / id_expected - 1.0) <= 1e-4
        and abs(m_vi.rocof_initial / vi_expected - 1.0) <= 1e-4
        and abs(m_id.rocof_initial) > abs(m_vi.rocof_initial)
    )
    _verdict(
        "criterion 10: initial RoCoF values exact to 4 figures and correctly ordered",
        ok,
        f"lag droop={m_id.rocof_initial:.6e} (formula {id_expected:.6e}), "
        f"virtual inertia={m_vi.rocof_initial:.6e} (formula {vi_expected:.6e})",
    )


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
