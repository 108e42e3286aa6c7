"""Storage control laws: droop, virtual inertia, and lag-compensated droop.

Each law maps the measured frequency deviation to a storage power command,
``p_b = c(omega)``.  Laws are exposed two ways:

* :meth:`StorageController.transfer` evaluates the transfer function c(s)
  at a complex frequency, for algebraic analysis;
* :meth:`StorageController.dynamics` is the state-space realization the
  simulator integrates: it returns the internal-state derivative and the
  instantaneous output.

The dynamic droop law ("iDroop") pairs a first-order lag with direct
proportional feedthrough,

    c(s) = (nu - alpha_b) / (tau_i s + 1) - nu,

which boosts the response while the turbine is still ramping and then
withdraws it.  With ``nu = alpha_b + alpha_g`` and ``tau_i`` equal to the
turbine time constant the lag term exactly cancels the turbine dynamics and
the closed loop becomes first order, so the frequency moves monotonically
to its steady state: no nadir.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import GridParams

__all__ = [
    "StorageController",
    "NoStorage",
    "Droop",
    "VirtualInertia",
    "IDroop",
]


class StorageController:
    """Common interface of all storage control laws."""

    alpha_b: float

    def transfer(self, s: complex) -> complex:
        """Evaluate the law's transfer function c(s) from omega to p_b."""
        raise NotImplementedError

    def dynamics(self, x_c: float, omega: float, omega_dot: float) -> tuple[float, float]:
        """One evaluation of the realized law.

        Returns ``(x_c_dot, p_b)``.  ``omega_dot`` is the exact algebraic
        frequency derivative supplied by the simulator; only the
        virtual-inertia law uses it.
        """
        raise NotImplementedError


@dataclass(frozen=True)
class NoStorage(StorageController):
    """No storage response at all; the baseline case."""

    @property
    def alpha_b(self) -> float:
        return 0.0

    def transfer(self, s: complex) -> complex:
        return 0.0 + 0.0j

    def dynamics(self, x_c: float, omega: float, omega_dot: float) -> tuple[float, float]:
        return 0.0, 0.0


@dataclass(frozen=True)
class Droop(StorageController):
    """Proportional law p_b = -alpha_b * omega (alpha_b is the inverse droop)."""

    alpha_b: float

    def __post_init__(self) -> None:
        if self.alpha_b < 0:
            raise ValueError(f"alpha_b must be >= 0, got {self.alpha_b}")

    def transfer(self, s: complex) -> complex:
        return complex(-self.alpha_b)

    def dynamics(self, x_c: float, omega: float, omega_dot: float) -> tuple[float, float]:
        return 0.0, -self.alpha_b * omega


@dataclass(frozen=True)
class VirtualInertia(StorageController):
    """Derivative-plus-droop law p_b = -(m_v * domega/dt + alpha_b * omega).

    The derivative term imitates inertial response with virtual inertia
    constant ``m_v`` [pu*s].  The simulator realizes it exactly by inertia
    augmentation (m_v moves into the swing equation), so no numerical
    differentiation of omega is ever performed; ``dynamics`` reconstructs
    p_b from the algebraic omega_dot it is handed.
    """

    m_v: float
    alpha_b: float = 0.0

    def __post_init__(self) -> None:
        if self.m_v < 0:
            raise ValueError(f"m_v must be >= 0, got {self.m_v}")
        if self.alpha_b < 0:
            raise ValueError(f"alpha_b must be >= 0, got {self.alpha_b}")

    def transfer(self, s: complex) -> complex:
        return -(self.m_v * s + self.alpha_b)

    def dynamics(self, x_c: float, omega: float, omega_dot: float) -> tuple[float, float]:
        return 0.0, -self.m_v * omega_dot - self.alpha_b * omega


@dataclass(frozen=True)
class IDroop(StorageController):
    """Dynamic droop: first-order lag in parallel with proportional feedback.

        c(s) = (nu - alpha_b) / (tau_i s + 1) - nu

    Minimal realization (one lag state x_c plus direct feedthrough):

        tau_i * dx_c/dt = -x_c + (nu - alpha_b) * omega
        p_b             =  x_c - nu * omega

    DC gain is -alpha_b for any nu, tau_i, so the steady-state frequency
    deviation only sees the droop part.
    """

    nu: float
    tau_i: float
    alpha_b: float = 0.0

    def __post_init__(self) -> None:
        if self.nu <= 0:
            raise ValueError(f"nu must be > 0, got {self.nu}")
        if self.tau_i <= 0:
            raise ValueError(f"tau_i must be > 0, got {self.tau_i}")
        if self.alpha_b < 0:
            raise ValueError(f"alpha_b must be >= 0, got {self.alpha_b}")

    @classmethod
    def nadir_tuned(cls, params: GridParams, alpha_b: float = 0.0) -> "IDroop":
        """Tuning that removes the frequency nadir altogether.

        Sets ``nu = alpha_b + alpha_g`` and ``tau_i`` equal to the turbine
        time constant; the lag then cancels the turbine pole and the closed
        loop collapses to first order.
        """
        if alpha_b < 0:
            raise ValueError(f"alpha_b must be >= 0, got {alpha_b}")
        return cls(
            nu=alpha_b + params.gen_inv_droop_alpha_g,
            tau_i=params.turbine_tau,
            alpha_b=alpha_b,
        )

    def transfer(self, s: complex) -> complex:
        den = self.tau_i * s + 1.0
        if den == 0:
            raise ValueError(f"transfer function pole at s = {s!r} (s = -1/tau_i)")
        return (self.nu - self.alpha_b) / den - self.nu

    def dynamics(self, x_c: float, omega: float, omega_dot: float) -> tuple[float, float]:
        x_c_dot = (-x_c + (self.nu - self.alpha_b) * omega) / self.tau_i
        return x_c_dot, x_c - self.nu * omega
