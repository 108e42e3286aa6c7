"""Scenario files: a small sectioned key = value format.

Example (``#`` starts a comment, blank lines are ignored)::

    [grid]
    inertia_h = 2.19          # s
    deadband_omega_db = 0.0   # pu; 0.0006 is a 36 mHz dead-band on 60 Hz

    [controller]
    type = idroop             # none | droop | virtual_inertia | idroop
    nu = 15.0
    tau_i = 1.0
    alpha_b = 0.0

    [disturbance]
    step_gw = 1.8             # or step_pu; positive = generation loss
    step_time = 0.0

    [sim]
    dt = 0.001
    horizon = 30.0
    freeze_secondary = true

Every key is optional: omitted grid values fall back to the Great Britain
reference set, the controller defaults to none, the disturbance to zero
magnitude, and the simulation options to their defaults.  Unknown sections
or keys, duplicate keys, and malformed values are rejected with a
line-anchored diagnostic.  ``serialize_scenario`` writes the canonical form
(pu magnitudes, full float precision) and round-trips through
``parse_scenario`` to an identical scenario.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path
from typing import Union

from .controllers import Droop, IDroop, NoStorage, StorageController, VirtualInertia
from .model import Disturbance, Scenario, SimOptions, gb_reference_params

__all__ = ["ScenarioParseError", "parse_scenario", "load_scenario", "serialize_scenario"]

_GRID_KEYS = (
    "base_power",
    "nominal_freq",
    "inertia_h",
    "turbine_tau",
    "load_damping_alpha_l",
    "gen_inv_droop_alpha_g",
    "secondary_gain_k_i",
    "deadband_omega_db",
)
_CONTROLLER_KEYS = {
    "none": (),
    "droop": ("alpha_b",),
    "virtual_inertia": ("m_v", "alpha_b"),
    "idroop": ("nu", "tau_i", "alpha_b"),
}
_DISTURBANCE_KEYS = ("step_pu", "step_gw", "step_time")
_SIM_KEYS = ("dt", "horizon", "settling_band", "freeze_secondary")
_SECTIONS = ("grid", "controller", "disturbance", "sim")


class ScenarioParseError(ValueError):
    """Scenario file rejected; message carries ``source:line``."""

    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


def _parse_float(raw: str, source: str, line: int, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ScenarioParseError(source, line, f"value for {key!r} is not a number: {raw!r}") from None


def _parse_bool(raw: str, source: str, line: int, key: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ScenarioParseError(source, line, f"value for {key!r} is not a boolean: {raw!r}")


def _read_sections(text: str, source: str) -> dict[str, dict[str, tuple[str, int]]]:
    sections: dict[str, dict[str, tuple[str, int]]] = {}
    current: Union[str, None] = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        stripped = raw_line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise ScenarioParseError(source, lineno, f"malformed section header: {raw_line.strip()!r}")
            name = stripped[1:-1].strip()
            if name not in _SECTIONS:
                raise ScenarioParseError(source, lineno, f"unknown section [{name}]; expected one of {list(_SECTIONS)}")
            if name in sections:
                raise ScenarioParseError(source, lineno, f"duplicate section [{name}]")
            sections[name] = {}
            current = name
            continue
        if current is None:
            raise ScenarioParseError(source, lineno, "key outside any [section]")
        if "=" not in stripped:
            raise ScenarioParseError(source, lineno, f"expected 'key = value', got {raw_line.strip()!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ScenarioParseError(source, lineno, f"expected 'key = value', got {raw_line.strip()!r}")
        if key in sections[current]:
            raise ScenarioParseError(source, lineno, f"duplicate key {key!r} in [{current}]")
        sections[current][key] = (value, lineno)
    return sections


def _check_known(entries: dict, allowed, section: str, source: str) -> None:
    for key, (_value, lineno) in entries.items():
        if key not in allowed:
            raise ScenarioParseError(
                source, lineno, f"unknown key {key!r} in [{section}]; expected one of {sorted(allowed)}"
            )


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse scenario text; unspecified values take the reference defaults."""
    sections = _read_sections(text, source)

    grid_entries = sections.get("grid", {})
    _check_known(grid_entries, _GRID_KEYS, "grid", source)
    grid = gb_reference_params()
    overrides = {
        key: _parse_float(raw, source, lineno, key)
        for key, (raw, lineno) in grid_entries.items()
    }
    if overrides:
        first_line = min(lineno for _, lineno in grid_entries.values())
        try:
            grid = replace(grid, **overrides)
        except ValueError as exc:
            raise ScenarioParseError(source, first_line, str(exc)) from None

    ctrl_entries = dict(sections.get("controller", {}))
    ctrl_type_raw, ctrl_line = ctrl_entries.pop("type", ("none", 0))
    ctrl_type = ctrl_type_raw.lower()
    if ctrl_type not in _CONTROLLER_KEYS:
        raise ScenarioParseError(
            source, ctrl_line, f"unknown controller type {ctrl_type_raw!r}; expected one of {sorted(_CONTROLLER_KEYS)}"
        )
    _check_known(ctrl_entries, _CONTROLLER_KEYS[ctrl_type], "controller", source)
    ctrl_kwargs = {
        key: _parse_float(raw, source, lineno, key)
        for key, (raw, lineno) in ctrl_entries.items()
    }
    try:
        controller: StorageController
        if ctrl_type == "none":
            controller = NoStorage()
        elif ctrl_type == "droop":
            controller = Droop(**ctrl_kwargs)
        elif ctrl_type == "virtual_inertia":
            controller = VirtualInertia(**ctrl_kwargs)
        else:
            controller = IDroop(**ctrl_kwargs)
    except (TypeError, ValueError) as exc:
        lineno = ctrl_line or (min(l for _, l in ctrl_entries.values()) if ctrl_entries else 0)
        raise ScenarioParseError(source, lineno, f"bad controller: {exc}") from None

    dist_entries = sections.get("disturbance", {})
    _check_known(dist_entries, _DISTURBANCE_KEYS, "disturbance", source)
    if "step_pu" in dist_entries and "step_gw" in dist_entries:
        _, lineno = dist_entries["step_gw"]
        raise ScenarioParseError(source, lineno, "give step_pu or step_gw, not both")
    step_pu = 0.0
    if "step_pu" in dist_entries:
        raw, lineno = dist_entries["step_pu"]
        step_pu = _parse_float(raw, source, lineno, "step_pu")
    elif "step_gw" in dist_entries:
        raw, lineno = dist_entries["step_gw"]
        step_pu = _parse_float(raw, source, lineno, "step_gw") / grid.base_power
    step_time = 0.0
    if "step_time" in dist_entries:
        raw, lineno = dist_entries["step_time"]
        step_time = _parse_float(raw, source, lineno, "step_time")
    try:
        disturbance = Disturbance(step_pu=step_pu, step_time=step_time)
    except ValueError as exc:
        lineno = min(l for _, l in dist_entries.values())
        raise ScenarioParseError(source, lineno, str(exc)) from None

    sim_entries = sections.get("sim", {})
    _check_known(sim_entries, _SIM_KEYS, "sim", source)
    sim_kwargs: dict[str, object] = {}
    for key, (raw, lineno) in sim_entries.items():
        if key == "freeze_secondary":
            sim_kwargs[key] = _parse_bool(raw, source, lineno, key)
        else:
            sim_kwargs[key] = _parse_float(raw, source, lineno, key)
    try:
        sim = SimOptions(**sim_kwargs)
    except ValueError as exc:
        lineno = min(l for _, l in sim_entries.values())
        raise ScenarioParseError(source, lineno, str(exc)) from None

    return Scenario(grid=grid, controller=controller, disturbance=disturbance, sim=sim)


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Read and parse a scenario file."""
    path = Path(path)
    return parse_scenario(path.read_text(), source=str(path))


def _controller_lines(controller: StorageController) -> list[str]:
    if isinstance(controller, NoStorage):
        return ["type = none"]
    if isinstance(controller, Droop):
        return ["type = droop", f"alpha_b = {controller.alpha_b!r}"]
    if isinstance(controller, VirtualInertia):
        return [
            "type = virtual_inertia",
            f"m_v = {controller.m_v!r}",
            f"alpha_b = {controller.alpha_b!r}",
        ]
    if isinstance(controller, IDroop):
        return [
            "type = idroop",
            f"nu = {controller.nu!r}",
            f"tau_i = {controller.tau_i!r}",
            f"alpha_b = {controller.alpha_b!r}",
        ]
    raise TypeError(f"unsupported controller type: {type(controller).__name__}")


def serialize_scenario(scenario: Scenario) -> str:
    """Canonical text form; parses back to an identical scenario."""
    g = scenario.grid
    lines = ["[grid]"]
    for key in _GRID_KEYS:
        lines.append(f"{key} = {getattr(g, key)!r}")
    lines.append("")
    lines.append("[controller]")
    lines.extend(_controller_lines(scenario.controller))
    lines.append("")
    lines.append("[disturbance]")
    lines.append(f"step_pu = {scenario.disturbance.step_pu!r}")
    lines.append(f"step_time = {scenario.disturbance.step_time!r}")
    lines.append("")
    lines.append("[sim]")
    lines.append(f"dt = {scenario.sim.dt!r}")
    lines.append(f"horizon = {scenario.sim.horizon!r}")
    lines.append(f"settling_band = {scenario.sim.settling_band!r}")
    lines.append(f"freeze_secondary = {str(scenario.sim.freeze_secondary).lower()}")
    return "\n".join(lines) + "\n"
