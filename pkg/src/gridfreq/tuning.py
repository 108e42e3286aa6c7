"""Algebraic design rules for storage-based frequency control.

All rules operate on the linearized single-area loop with the secondary
gain at zero.  Writing M = 2H + m_v for the effective inertia and
sigma = alpha_l + alpha_g + alpha_b for the aggregate inverse droop, the
closed loop from the power imbalance to omega is

    omega_hat / p_L_hat = -(tau_T s + 1) / (M tau_T s^2 + (tau_T (alpha_l + alpha_b) + M) s + sigma)

and every rule here is a statement about that polynomial:

* the nadir is eliminated exactly when
  M (1/tau_T - 2 sqrt(alpha_g / (M tau_T))) >= alpha_l + alpha_b;
* equivalently m_v >= m_v_min = tau_T beta^2 - 2H with
  beta = sqrt(alpha_g) + sqrt(alpha_l + alpha_g + alpha_b), the choice that
  makes the denominator critically damped (zero discriminant);
* a linear approximation m_v_min ~ 2 tau_T alpha_b + 4 tau_T alpha_g - 2H
  holds when alpha_b and alpha_l are small against alpha_g.

The droop sizing rule inverts the steady-state relation
omega(inf) = -delta_p / sigma for a demanded deviation target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .model import GridParams

__all__ = [
    "ViNadirCheck",
    "ViDesign",
    "steady_state_deviation",
    "vi_nadir_condition",
    "mv_min_exact",
    "mv_min_linear",
    "vi_design",
    "design_droop_from_target",
    "mv_min_from_target",
    "energy_capacity_estimate",
]

# Equality checks against the nadir-elimination boundary use this absolute
# tolerance, in pu units.
BOUNDARY_TOL = 1e-9


class ViNadirCheck(NamedTuple):
    """Outcome of the algebraic nadir-elimination test."""

    eliminated: bool
    margin: float


def steady_state_deviation(
    delta_p: float, alpha_l: float, alpha_g: float, alpha_b: float
) -> float:
    """Post-transient frequency deviation -delta_p / (alpha_l + alpha_g + alpha_b).

    Valid with the secondary gain at zero; the aggregate inverse droop alone
    fixes where the frequency lands.
    """
    total = alpha_l + alpha_g + alpha_b
    if total <= 0:
        raise ValueError(f"aggregate inverse droop must be > 0, got {total}")
    return -delta_p / total


def vi_nadir_condition(params: GridParams, alpha_b: float, m_v: float) -> ViNadirCheck:
    """Test whether (alpha_b, m_v) eliminates the nadir; margin >= 0 means yes.

    margin = (2H + m_v) (1/tau_T - 2 sqrt(alpha_g / ((2H + m_v) tau_T)))
             - alpha_l - alpha_b
    """
    if m_v < 0:
        raise ValueError(f"m_v must be >= 0, got {m_v}")
    if alpha_b < 0:
        raise ValueError(f"alpha_b must be >= 0, got {alpha_b}")
    m = 2.0 * params.inertia_h + m_v
    tau = params.turbine_tau
    margin = (
        m * (1.0 / tau - 2.0 * math.sqrt(params.gen_inv_droop_alpha_g / (tau * m)))
        - params.load_damping_alpha_l
        - alpha_b
    )
    return ViNadirCheck(eliminated=margin >= 0.0, margin=margin)


def mv_min_exact(params: GridParams, alpha_b: float) -> float:
    """Smallest virtual inertia that removes the nadir: tau_T beta^2 - 2H.

    beta = sqrt(alpha_g) + sqrt(alpha_l + alpha_g + alpha_b).  A negative
    result means the physical inertia already suffices; callers clamp to 0
    when configuring a controller (the raw value carries the design margin).
    """
    if alpha_b < 0:
        raise ValueError(f"alpha_b must be >= 0, got {alpha_b}")
    beta = math.sqrt(params.gen_inv_droop_alpha_g) + math.sqrt(
        params.load_damping_alpha_l + params.gen_inv_droop_alpha_g + alpha_b
    )
    return params.turbine_tau * beta * beta - 2.0 * params.inertia_h


def mv_min_linear(params: GridParams, alpha_b: float) -> float:
    """Linearized minimum virtual inertia 2 tau_T alpha_b + 4 tau_T alpha_g - 2H."""
    if alpha_b < 0:
        raise ValueError(f"alpha_b must be >= 0, got {alpha_b}")
    tau = params.turbine_tau
    return 2.0 * tau * alpha_b + 4.0 * tau * params.gen_inv_droop_alpha_g - 2.0 * params.inertia_h


@dataclass(frozen=True)
class ViDesign:
    """Bundle of the virtual-inertia sizing quantities at one alpha_b."""

    alpha_b: float
    m_v_min_exact: float
    m_v_min_linear: float
    beta: float


def vi_design(params: GridParams, alpha_b: float) -> ViDesign:
    """Evaluate both minimum-inertia rules at one inverse storage droop."""
    beta = math.sqrt(params.gen_inv_droop_alpha_g) + math.sqrt(
        params.load_damping_alpha_l + params.gen_inv_droop_alpha_g + alpha_b
    )
    return ViDesign(
        alpha_b=alpha_b,
        m_v_min_exact=mv_min_exact(params, alpha_b),
        m_v_min_linear=mv_min_linear(params, alpha_b),
        beta=beta,
    )


def design_droop_from_target(
    delta_p: float, delta_omega_target: float, alpha_g: float
) -> float:
    """Inverse storage droop needed to cap the deviation: |delta_p/delta_omega| - alpha_g.

    Clamped at zero when the generators alone meet the target.
    """
    if delta_omega_target == 0:
        raise ValueError("delta_omega_target must be nonzero")
    return max(0.0, abs(delta_p / delta_omega_target) - alpha_g)


def mv_min_from_target(
    delta_p: float,
    delta_omega_target: float,
    params: GridParams,
    use_exact_when_clamped: bool = False,
) -> float:
    """Minimum virtual inertia for a deviation target, via the linear rule.

    2 tau_T |delta_p/delta_omega| + 2 tau_T alpha_g - 2H when the droop
    design is unclamped; when the target needs no storage droop this falls
    back to the alpha_b = 0 rule (linear by default, since the target
    formula is itself the linearization; exact on request).
    """
    alpha_b = design_droop_from_target(delta_p, delta_omega_target, params.gen_inv_droop_alpha_g)
    if alpha_b > 0:
        tau = params.turbine_tau
        return (
            2.0 * tau * abs(delta_p / delta_omega_target)
            + 2.0 * tau * params.gen_inv_droop_alpha_g
            - 2.0 * params.inertia_h
        )
    if use_exact_when_clamped:
        return mv_min_exact(params, 0.0)
    return mv_min_linear(params, 0.0)


def energy_capacity_estimate(alpha_b: float, k_i: float) -> float:
    """Disturbance-normalized storage energy requirement, alpha_b / k_i [s].

    With the secondary loop active, the storage keeps injecting
    -alpha_b * omega until the frequency is restored, integrating to
    alpha_b * delta_p / k_i of energy; normalized by the disturbance this
    is alpha_b / k_i seconds.  Undefined without secondary control (the
    droop part then stores energy without bound).
    """
    if alpha_b < 0:
        raise ValueError(f"alpha_b must be >= 0, got {alpha_b}")
    if k_i <= 0:
        raise ValueError("energy estimate needs k_i > 0; without secondary control the stored energy is unbounded for alpha_b > 0")
    return alpha_b / k_i
