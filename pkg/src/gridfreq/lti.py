"""Closed-form step responses of the linearized loop: the oracle path.

With the secondary gain at zero and no governor dead-band, the loop from
the power imbalance to the frequency deviation is a rational function.
Writing M = 2H + m_v and sigma = alpha_l + alpha_b + alpha_g:

* no storage / droop / virtual inertia:

      G(s) = -(tau_T s + 1) / (M tau_T s^2 + (tau_T (alpha_l + alpha_b) + M) s + sigma)

* lag droop with its lag matched to the turbine (tau_i = tau_T = tau):

      G(s) = -(tau s + 1) / (2H tau s^2 + (2H + tau (alpha_l + nu)) s + sigma)

  and when additionally nu = alpha_b + alpha_g the numerator cancels a
  denominator factor exactly, leaving the first-order loop

      G(s) = -1 / (2H s + sigma);

* lag droop with tau_i != tau_T is genuinely third order; its polynomial
  form and poles are still built here, but closed-form step responses are
  limited to order <= 2 (everything the capacity and tuning analysis needs)
  and higher orders are delegated to the time-domain simulator.

Step responses are evaluated by modal decomposition of G(s)/s with the
repeated-pole case handled explicitly via the t*exp(p t) mode; the
critically damped boundary is exactly the case the tuning rules single
out, so it is not approximated by pole perturbation.  Nearly-repeated
poles (separation below 1e-7 relative) are collapsed onto the repeated
formula to avoid the catastrophic residue cancellation of the two-mode
form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from .controllers import Droop, IDroop, NoStorage, StorageController, VirtualInertia
from .model import GridParams

__all__ = [
    "UnsupportedOrderError",
    "ClosedLoopLti",
    "NadirPoint",
    "closed_loop_tf",
    "step_response",
    "nadir_of_response",
    "pole_residual",
]

# Pole pairs closer than this (relative to their magnitude) are treated as
# repeated; the two-exponential form loses precision long before this.
_REPEATED_POLE_RTOL = 1e-7

# A stationary point this close to t = 0 is integrator-of-the-mind fuzz,
# not an interior nadir.
_STATIONARY_TOL = 1e-9

# Relative tolerance for recognizing the exact-cancellation tunings.
_CANCEL_RTOL = 1e-12


class UnsupportedOrderError(ValueError):
    """Closed-form response requested for a loop of order > 2."""


class NadirPoint(NamedTuple):
    """Location and depth of the first stationary point of the response."""

    omega: float
    time: float


@dataclass(frozen=True)
class ClosedLoopLti:
    """Rational closed loop omega_hat / p_L_hat.

    ``num``/``den`` are real polynomial coefficients, highest power first;
    ``poles`` are the denominator roots.  ``stable`` is False when any pole
    has a positive real part (flagged, not an error).
    """

    num: np.ndarray
    den: np.ndarray
    poles: np.ndarray
    label: str
    stable: bool

    @property
    def order(self) -> int:
        return len(self.den) - 1


def _trim(coeffs: np.ndarray) -> np.ndarray:
    """Drop leading zero coefficients (none expected for valid params)."""
    nz = np.flatnonzero(np.abs(coeffs) > 0)
    if len(nz) == 0:
        return coeffs[-1:]
    return coeffs[nz[0]:]


def _build(num, den, label: str) -> ClosedLoopLti:
    num = _trim(np.asarray(num, dtype=float))
    den = _trim(np.asarray(den, dtype=float))
    if len(num) > len(den):
        raise ValueError("numerator degree exceeds denominator degree")
    poles = np.roots(den) if len(den) > 1 else np.array([], dtype=complex)
    poles = poles[np.argsort(poles.real)]
    stable = bool(np.all(poles.real < 0.0))
    return ClosedLoopLti(num=num, den=den, poles=poles, label=label, stable=stable)


def closed_loop_tf(params: GridParams, cfg: StorageController) -> ClosedLoopLti:
    """Assemble the closed loop for one control law.

    The secondary gain is treated as zero (its ~minutes timescale is
    irrelevant to the transient the oracle certifies); a nonzero dead-band
    is rejected since the loop is then not linear.
    """
    if params.deadband_omega_db != 0.0:
        raise ValueError("closed_loop_tf covers the linear loop only; deadband_omega_db must be 0")
    two_h = 2.0 * params.inertia_h
    tau_t = params.turbine_tau
    a_l = params.load_damping_alpha_l
    a_g = params.gen_inv_droop_alpha_g

    if isinstance(cfg, (NoStorage, Droop, VirtualInertia)):
        m_v = cfg.m_v if isinstance(cfg, VirtualInertia) else 0.0
        a_b = cfg.alpha_b
        m = two_h + m_v
        num = [-tau_t, -1.0]
        den = [m * tau_t, tau_t * (a_l + a_b) + m, a_l + a_b + a_g]
        label = {NoStorage: "no_storage", Droop: "droop", VirtualInertia: "virtual_inertia"}[type(cfg)]
        return _build(num, den, label)

    if isinstance(cfg, IDroop):
        nu, tau_i, a_b = cfg.nu, cfg.tau_i, cfg.alpha_b
        sigma = a_l + a_b + a_g
        if math.isclose(tau_i, tau_t, rel_tol=_CANCEL_RTOL, abs_tol=0.0):
            if math.isclose(nu, a_b + a_g, rel_tol=_CANCEL_RTOL, abs_tol=0.0):
                # lag cancels the turbine pole: first-order loop
                return _build([-1.0], [two_h, sigma], "idroop_nadir_tuned")
            num = [-tau_t, -1.0]
            den = [two_h * tau_t, two_h + tau_t * (a_l + nu), sigma]
            return _build(num, den, "idroop_matched_lag")
        # general lag droop: third order, poles only (no closed-form step)
        lag_i = np.array([tau_i, 1.0])
        lag_t = np.array([tau_t, 1.0])
        num = -np.polymul(lag_i, lag_t)
        den = np.polymul(np.array([two_h, a_l + nu]), np.polymul(lag_i, lag_t))
        den = np.polyadd(den, -(nu - a_b) * lag_t)
        den = np.polyadd(den, a_g * lag_i)
        return _build(num, den, "idroop")

    raise TypeError(f"unsupported controller type: {type(cfg).__name__}")


def pole_residual(lti: ClosedLoopLti) -> float:
    """Worst relative residual |den(p)| / sum_i |den_i p^i| over the poles."""
    worst = 0.0
    for p in lti.poles:
        scale = sum(
            abs(c) * abs(p) ** (len(lti.den) - 1 - i) for i, c in enumerate(lti.den)
        )
        worst = max(worst, abs(np.polyval(lti.den, p)) / max(scale, 1e-300))
    return worst


def _classify_second_order(poles: np.ndarray) -> str:
    p1, p2 = poles
    scale = max(1.0, abs(p1), abs(p2))
    if abs(p1 - p2) <= _REPEATED_POLE_RTOL * scale:
        return "repeated"
    if abs(p1.imag) > 0.0:
        return "complex"
    return "real"


def _repeated_pole_modes(num: np.ndarray, den: np.ndarray, poles: np.ndarray):
    """Partial fractions of G(s)/s for a (nearly) repeated pole p.

    G(s)/s = A/s + B/(s - p) + C/(s - p)^2 with
    A = N(0)/D(0), C = N(p)/(d2 p), B = (N'(p) p - N(p)) / (d2 p^2).
    """
    p = 0.5 * float(poles[0].real + poles[1].real)
    d2 = den[0]
    n_p = float(np.polyval(num, p))
    dn_p = float(np.polyval(np.polyder(num), p)) if len(num) > 1 else 0.0
    a = float(np.polyval(num, 0.0)) / float(np.polyval(den, 0.0))
    c = n_p / (d2 * p)
    b = (dn_p * p - n_p) / (d2 * p * p)
    return p, a, b, c


def step_response(
    lti: ClosedLoopLti, delta_p: float, t: Union[float, np.ndarray]
) -> Union[float, np.ndarray]:
    """Exact omega(t) for a disturbance step of magnitude delta_p at t = 0.

    ``t`` may be a scalar or an array (seconds, all >= 0).  Limited to loop
    order <= 2; higher orders raise :class:`UnsupportedOrderError` and
    belong to the simulator.
    """
    if lti.order > 2:
        raise UnsupportedOrderError(f"loop order {lti.order} > 2; use the time-domain simulator")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValueError("t must be >= 0")
    num, den = lti.num, lti.den

    if lti.order == 1:
        d1, d0 = den
        p = -d0 / d1
        a = float(np.polyval(num, 0.0)) / d0
        r = float(np.polyval(num, p)) / (p * d1)
        y = a + r * np.exp(p * t_arr)
    else:
        kind = _classify_second_order(lti.poles)
        if kind == "repeated":
            p, a, b, c = _repeated_pole_modes(num, den, lti.poles)
            y = a + (b + c * t_arr) * np.exp(p * t_arr)
        elif kind == "complex":
            p = lti.poles[0] if lti.poles[0].imag > 0 else lti.poles[1]
            dprime = np.polyval(np.polyder(den), p)
            rho_s = np.polyval(num, p) / (p * dprime)
            a = float(np.polyval(num, 0.0)) / float(np.polyval(den, 0.0))
            y = a + 2.0 * (rho_s * np.exp(p * t_arr)).real
        else:
            p1 = float(lti.poles[0].real)
            p2 = float(lti.poles[1].real)
            dprime = np.polyder(den)
            r1 = float(np.polyval(num, p1)) / (p1 * float(np.polyval(dprime, p1)))
            r2 = float(np.polyval(num, p2)) / (p2 * float(np.polyval(dprime, p2)))
            a = float(np.polyval(num, 0.0)) / float(np.polyval(den, 0.0))
            y = a + r1 * np.exp(p1 * t_arr) + r2 * np.exp(p2 * t_arr)

    y = delta_p * y
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(y)
    return y


def nadir_of_response(lti: ClosedLoopLti, delta_p: float) -> Optional[NadirPoint]:
    """First interior stationary point of the step response, or None if monotone.

    Solves d(omega)/dt = 0 in closed form (exponential or trigonometric
    root).  For delta_p > 0 the returned point is the frequency nadir; a
    None verdict certifies nadir elimination without simulation.
    """
    if not lti.stable:
        raise ValueError("nadir analysis requires a stable loop")
    if lti.order > 2:
        raise UnsupportedOrderError(f"loop order {lti.order} > 2; use the time-domain simulator")
    if delta_p == 0:
        return None
    if lti.order == 1:
        return None

    num, den = lti.num, lti.den
    kind = _classify_second_order(lti.poles)

    if kind == "repeated":
        # omega_dot ~ e^{pt} ((B p + C) + C p t)
        p, _a, b, c = _repeated_pole_modes(num, den, lti.poles)
        slope = c * p
        if slope == 0.0:
            return None
        t_star = -(b * p + c) / slope
        if t_star <= _STATIONARY_TOL:
            return None
    elif kind == "complex":
        # omega_dot ~ 2 |rho| e^{sigma t} cos(w_d t + phi): roots at
        # w_d t + phi = pi/2 + k pi
        p = lti.poles[0] if lti.poles[0].imag > 0 else lti.poles[1]
        rho = np.polyval(num, p) / np.polyval(np.polyder(den), p)
        w_d = p.imag
        phi = cmath.phase(rho)
        k = math.ceil((w_d * _STATIONARY_TOL + phi - math.pi / 2.0) / math.pi)
        t_star = (math.pi / 2.0 + k * math.pi - phi) / w_d
        while t_star <= _STATIONARY_TOL:  # guard against ceil landing on the boundary
            k += 1
            t_star = (math.pi / 2.0 + k * math.pi - phi) / w_d
    else:
        p1 = float(lti.poles[0].real)
        p2 = float(lti.poles[1].real)
        dprime = np.polyder(den)
        rho1 = float(np.polyval(num, p1)) / float(np.polyval(dprime, p1))
        rho2 = float(np.polyval(num, p2)) / float(np.polyval(dprime, p2))
        scale = abs(rho1) + abs(rho2)
        if scale == 0.0 or min(abs(rho1), abs(rho2)) <= 1e-14 * scale:
            return None  # single excited mode: monotone
        if rho1 * rho2 > 0.0:
            return None  # same-sign modes never cancel: monotone
        t_star = math.log(-rho2 / rho1) / (p1 - p2)
        if t_star <= _STATIONARY_TOL:
            return None

    return NadirPoint(omega=float(step_response(lti, delta_p, t_star)), time=float(t_star))
