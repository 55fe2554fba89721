"""Flat key = value run configuration.

Base physical parameters are SI (rad/s, K, W, m). Experiment grids that the
source figures quote as multiples of the first mechanical frequency use
those units; each key's unit is stated in its help string and in the
generated default file. Lines starting with '#' and blank lines are
ignored; unknown keys are rejected.

Grid specifications use one of
    lin:<start>:<stop>:<n>   inclusive linear grid
    log:<start>:<stop>:<n>   inclusive logarithmic grid
    list:<v1>;<v2>;...       explicit values
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from .errors import ConfigError
from .params import DETUNING_FIXED, DETUNING_RESONANT, SystemParams

_OMEGA1_DEFAULT = 2.0 * math.pi * 5.0e6

_T_LIST_MK = "list:1;5;10;25;50;75;100;150;200;250;300;350;400;450;500"


@dataclass(frozen=True)
class _Key:
    name: str
    kind: str  # float | int | str | bool | complex | float_list | str_list | grid
    default: Any
    help: str


_SCHEMA: list[_Key] = [
    # --- base physical parameters (SI) ---
    _Key("omega_m_1", "float", _OMEGA1_DEFAULT, "mechanical frequency of mirror 1 [rad/s]"),
    _Key("omega_m_2", "float", _OMEGA1_DEFAULT, "mechanical frequency of mirror 2 [rad/s]"),
    _Key("gamma_m_1", "float", 1e-5 * _OMEGA1_DEFAULT, "mechanical damping of mirror 1 [rad/s]"),
    _Key("gamma_m_2", "float", 1e-5 * _OMEGA1_DEFAULT, "mechanical damping of mirror 2 [rad/s]"),
    _Key("duffing_1", "float", 1e-4 * _OMEGA1_DEFAULT, "Duffing parameter of mirror 1 [rad/s]"),
    _Key("duffing_2", "float", 1e-4 * _OMEGA1_DEFAULT, "Duffing parameter of mirror 2 [rad/s]"),
    _Key("g_single_1", "float", 6.07e-4 * _OMEGA1_DEFAULT, "single-photon coupling of mirror 1 [rad/s]"),
    _Key("g_single_2", "float", 6.07e-4 * _OMEGA1_DEFAULT, "single-photon coupling of mirror 2 [rad/s]"),
    _Key("kappa", "float", math.pi * 1e5, "cavity amplitude decay [rad/s]"),
    _Key("eta_e", "float", 0.3 * _OMEGA1_DEFAULT, "enhanced atom-field coupling [rad/s]"),
    _Key("gamma_e", "float", 1e-5 * _OMEGA1_DEFAULT, "atomic decay [rad/s]"),
    _Key("temperature_1", "float", 0.025, "bath temperature of mirror 1 [K]"),
    _Key("temperature_2", "float", 0.025, "bath temperature of mirror 2 [K]"),
    _Key("laser_wavelength", "float", 810e-9, "drive laser wavelength [m]"),
    _Key("input_power", "float", 1e-3, "drive laser input power [W]"),
    _Key("detuning_rule", "str", DETUNING_RESONANT, "detuning rule: resonant | fixed"),
    _Key("detuning_fixed", "float", 0.0, "cavity/atom detuning when rule = fixed [rad/s]"),
    # --- coupling sweep, fig2 ---
    _Key("fig2_g1_list", "float_list", [1.92e-6, 1.36e-5, 1.36e-4, 6.07e-4],
         "single-photon couplings g_1 [units of omega_1]"),
    _Key("fig2_power_grid", "grid", "log:1e-9:1e-2:200", "drive power grid [W]; a zero-power row is prepended"),
    _Key("fig2_duffing", "float", 1e-4, "Duffing parameter for the transformed-coupling table [units of omega_j]"),
    # --- atomic squeezing vs atom coupling, fig3 ---
    _Key("fig3_g1_list", "float_list", [0.1, 0.3], "enhanced couplings G_1 [units of omega_1]"),
    _Key("fig3_eta_grid", "grid", "lin:0.001:0.5:500", "atom-field coupling grid [units of omega_1]"),
    # --- squeezing robustness, fig4 ---
    _Key("fig4_kappa_grid", "grid", "log:1e-3:1e-1:21", "cavity decay grid [units of omega_1]"),
    _Key("fig4_temperature_grid_mk", "grid", _T_LIST_MK, "bath temperature grid [mK]"),
    _Key("fig4_eta_coarse_points", "int", 60, "coarse grid size for the peak search over eta_e"),
    # --- transfer fidelity vs coupling, fig5 ---
    _Key("fig5_states", "str_list", ["1:0.25", "1:0.5", "2:0.5", "1:1"],
         "initial states rho:xi (rho may be complex, e.g. 1+0.5j:0.25)"),
    _Key("fig5_g1_grid", "grid", "lin:0.01:1.5:150", "enhanced coupling grid [units of omega_1]"),
    _Key("fig5_eta_e", "float", 0.005, "atom-field coupling [units of omega_1]"),
    # --- transfer robustness, fig6 ---
    _Key("fig6_g1_list", "float_list", [0.1, 0.3, 0.8], "enhanced couplings G_1 [units of omega_1]"),
    _Key("fig6_baseline_g1", "float", 0.1, "G_1 for the no-anharmonicity baseline [units of omega_1]"),
    _Key("fig6_rho", "complex", complex(1.0), "coherent amplitude of the transferred state"),
    _Key("fig6_xi", "float", 0.5, "squeeze of the transferred state"),
    _Key("fig6_kappa_grid", "grid", "log:1e-3:1e-1:21", "cavity decay grid [units of omega_1]"),
    _Key("fig6_eta_grid", "grid", "log:0.005:0.1:21", "atom-field coupling grid [units of omega_1]"),
    _Key("fig6_temperature_grid_mk", "grid", _T_LIST_MK, "bath temperature grid [mK]"),
    # --- free-form sweep ---
    _Key("sweep_axes", "str_list", [], "ordered axis names; each needs sweep_grid_<name>"),
    _Key("sweep_observables", "str_list", [], "observable names to emit per grid point"),
    _Key("sweep_rho", "complex", complex(1.0), "state amplitude for fidelity observables"),
    _Key("sweep_xi", "float", 0.5, "state squeeze for fidelity observables"),
]

_SCHEMA_BY_NAME = {k.name: k for k in _SCHEMA}

_SWEEP_GRID_PREFIX = "sweep_grid_"

# axis names accepted by the sweep: SI parameter keys plus the reduced-unit
# coupling control used by the figure experiments
SWEEPABLE_SI_KEYS = (
    "omega_m_1", "omega_m_2", "gamma_m_1", "gamma_m_2", "duffing_1", "duffing_2",
    "g_single_1", "g_single_2", "kappa", "eta_e", "gamma_e",
    "temperature_1", "temperature_2", "laser_wavelength", "input_power",
)
SWEEP_CONTROL_KEYS = ("G1_target",)  # units of omega_1


def _parse_value(key: _Key, raw: str):
    raw = raw.strip()
    try:
        if key.kind == "float":
            return float(raw)
        if key.kind == "int":
            return int(raw)
        if key.kind == "bool":
            if raw.lower() in ("true", "1", "yes", "on"):
                return True
            if raw.lower() in ("false", "0", "no", "off"):
                return False
            raise ValueError(f"not a boolean: {raw!r}")
        if key.kind == "complex":
            return complex(raw)
        if key.kind == "float_list":
            return [float(tok) for tok in raw.split(",") if tok.strip()] if raw else []
        if key.kind == "str_list":
            return [tok.strip() for tok in raw.split(",") if tok.strip()] if raw else []
        if key.kind in ("str", "grid"):
            return raw
    except ValueError as exc:
        raise ConfigError(f"bad value for {key.name!r}: {exc}") from None
    raise ConfigError(f"unhandled kind {key.kind!r} for {key.name!r}")


def _format_value(key: _Key, value) -> str:
    if key.kind == "float":
        return repr(float(value))
    if key.kind == "int":
        return str(int(value))
    if key.kind == "bool":
        return "true" if value else "false"
    if key.kind == "complex":
        return str(value).strip("()")
    if key.kind == "float_list":
        return ",".join(repr(float(v)) for v in value)
    if key.kind == "str_list":
        return ",".join(value)
    return str(value)


def default_config() -> dict:
    cfg = {k.name: k.default for k in _SCHEMA}
    cfg["_sweep_grids"] = {}
    return cfg


def default_config_text() -> str:
    """Self-documenting default configuration file."""
    lines = [
        "# duffing-optomech run configuration",
        "# base physical parameters are SI; grid specs: lin:a:b:n | log:a:b:n | list:v1;v2;...",
        "",
    ]
    for key in _SCHEMA:
        lines.append(f"# {key.help}")
        lines.append(f"{key.name} = {_format_value(key, key.default)}")
        lines.append("")
    lines.append("# sweep axis grids are declared as sweep_grid_<axis>, e.g.")
    lines.append("# sweep_grid_input_power = log:1e-6:1e-3:40")
    lines.append("")
    return "\n".join(lines)


def parse_config(text: str) -> dict:
    """Parse configuration text; defaults fill missing keys, unknown keys fail."""
    cfg = default_config()
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        name, _, raw_value = line.partition("=")
        name = name.strip()
        if name.startswith(_SWEEP_GRID_PREFIX):
            axis = name[len(_SWEEP_GRID_PREFIX):]
            if axis not in SWEEPABLE_SI_KEYS + SWEEP_CONTROL_KEYS:
                raise ConfigError(f"line {lineno}: {axis!r} is not a sweepable axis")
            cfg["_sweep_grids"][axis] = raw_value.strip()
            continue
        key = _SCHEMA_BY_NAME.get(name)
        if key is None:
            raise ConfigError(f"line {lineno}: unknown key {name!r}")
        cfg[name] = _parse_value(key, raw_value)
    return cfg


def parse_grid(spec: str, name: str = "grid") -> np.ndarray:
    """Evaluate a grid specification string into an array of floats."""
    parts = spec.split(":")
    kind = parts[0].strip().lower() if parts else ""
    try:
        if kind == "lin" and len(parts) == 4:
            start, stop, n = float(parts[1]), float(parts[2]), int(parts[3])
            _check_grid_count(n, name)
            return np.linspace(start, stop, n)
        if kind == "log" and len(parts) == 4:
            start, stop, n = float(parts[1]), float(parts[2]), int(parts[3])
            _check_grid_count(n, name)
            if start <= 0.0 or stop <= 0.0:
                raise ConfigError(f"{name}: log grid endpoints must be positive")
            return np.logspace(math.log10(start), math.log10(stop), n)
        if kind == "list" and len(parts) == 2:
            values = [float(tok) for tok in parts[1].split(";") if tok.strip()]
            if not values:
                raise ConfigError(f"{name}: empty list grid")
            return np.array(values)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"{name}: bad grid spec {spec!r}: {exc}") from None
    raise ConfigError(f"{name}: bad grid spec {spec!r}")


def _check_grid_count(n: int, name: str) -> None:
    if n < 1:
        raise ConfigError(f"{name}: grid needs at least one point")


def parse_state_list(entries: list[str]) -> list[tuple[complex, float]]:
    """Parse 'rho:xi' initial-state entries."""
    states = []
    for entry in entries:
        rho_s, sep, xi_s = entry.partition(":")
        if not sep:
            raise ConfigError(f"bad state spec {entry!r}; expected rho:xi")
        try:
            states.append((complex(rho_s.strip()), float(xi_s.strip())))
        except ValueError as exc:
            raise ConfigError(f"bad state spec {entry!r}: {exc}") from None
    if not states:
        raise ConfigError("state list is empty")
    return states


def config_to_params(cfg: dict) -> SystemParams:
    """Materialize the base SI parameter set from a parsed configuration."""
    rule = cfg["detuning_rule"]
    if rule not in (DETUNING_RESONANT, DETUNING_FIXED):
        raise ConfigError(f"detuning_rule must be 'resonant' or 'fixed', got {rule!r}")
    return SystemParams(
        omega_m=(cfg["omega_m_1"], cfg["omega_m_2"]),
        gamma_m=(cfg["gamma_m_1"], cfg["gamma_m_2"]),
        duffing=(cfg["duffing_1"], cfg["duffing_2"]),
        g_single=(cfg["g_single_1"], cfg["g_single_2"]),
        kappa=cfg["kappa"],
        eta_e=cfg["eta_e"],
        gamma_e=cfg["gamma_e"],
        temperature=(cfg["temperature_1"], cfg["temperature_2"]),
        laser_wavelength=cfg["laser_wavelength"],
        input_power=cfg["input_power"],
        detuning_rule=rule,
        detuning_fixed=cfg["detuning_fixed"] if rule == DETUNING_FIXED else None,
    )


def serialize_config(cfg: dict) -> str:
    """Canonical serialization of a resolved configuration (for hashing/manifests)."""
    lines = []
    for key in _SCHEMA:
        lines.append(f"{key.name} = {_format_value(key, cfg[key.name])}")
    for axis in sorted(cfg.get("_sweep_grids", {})):
        lines.append(f"{_SWEEP_GRID_PREFIX}{axis} = {cfg['_sweep_grids'][axis]}")
    return "\n".join(lines) + "\n"
