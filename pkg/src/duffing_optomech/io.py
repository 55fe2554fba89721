"""CSV tables and run manifests.

Tables are CSV with a leading '#'-commented block carrying the reduced
parameter set, then a header row and data rows. Data files contain no
timestamps, so identical configurations reproduce them byte for byte;
timestamps live only in the JSON manifest.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .params import ReducedParams

TOOL_VERSION = "0.1.0"


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    comment: list[str] = field(default_factory=list)


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        return repr(v)
    return str(value)


def reduced_comment_block(reduced: ReducedParams) -> list[str]:
    """Reduced parameter set as comment lines for table headers."""
    items = [
        ("omega_2_over_omega_1", reduced.omega_m[1]),
        ("gamma_1_over_omega_1", reduced.gamma_m[0]),
        ("gamma_2_over_omega_1", reduced.gamma_m[1]),
        ("duffing_1_over_omega_1", reduced.duffing[0]),
        ("duffing_2_over_omega_1", reduced.duffing[1]),
        ("g_1_over_omega_1", reduced.g_single[0]),
        ("g_2_over_omega_1", reduced.g_single[1]),
        ("kappa_over_omega_1", reduced.kappa),
        ("eta_e_over_omega_1", reduced.eta_e),
        ("gamma_e_over_omega_1", reduced.gamma_e),
        ("n_th_1", reduced.n_th[0]),
        ("n_th_2", reduced.n_th[1]),
        ("drive_over_omega_1", reduced.eps),
        ("temperature_1_K", reduced.temperature[0]),
        ("temperature_2_K", reduced.temperature[1]),
        ("omega_1_rad_per_s", reduced.omega1_si),
        ("detuning_rule", reduced.detuning_rule),
    ]
    lines = ["reduced parameters:"]
    lines.extend(f"  {name} = {_format_cell(value)}" for name, value in items)
    return lines


def write_table(table: Table, out_dir: Path) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / f"{table.name}.csv"
    lines = [f"# {line}" for line in ([f"duffing-optomech {TOOL_VERSION} table {table.name}"] + table.comment)]
    lines.append(",".join(table.columns))
    for row in table.rows:
        if len(row) != len(table.columns):
            raise ValueError(f"row width {len(row)} != {len(table.columns)} in {table.name}")
        lines.append(",".join(_format_cell(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def config_hash(config_text: str) -> str:
    return hashlib.sha256(config_text.encode("utf-8")).hexdigest()


def write_manifest(
    out_dir: Path,
    command: str,
    config_text: str,
    reduced: ReducedParams,
    tables: list[Table],
    diagnostics: dict,
    timings: dict,
) -> Path:
    """One manifest per command run, pairing every emitted table with its provenance."""
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {
        "tool": "duffing-optomech",
        "version": TOOL_VERSION,
        "command": command,
        "config_sha256": config_hash(config_text),
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "reduced_params": {
            "omega_m": list(reduced.omega_m),
            "gamma_m": list(reduced.gamma_m),
            "duffing": list(reduced.duffing),
            "g_single": list(reduced.g_single),
            "kappa": reduced.kappa,
            "eta_e": reduced.eta_e,
            "gamma_e": reduced.gamma_e,
            "n_th": list(reduced.n_th),
            "drive": reduced.eps,
            "omega1_si": reduced.omega1_si,
            "temperature_K": list(reduced.temperature),
            "input_power_W": reduced.input_power,
            "laser_wavelength_m": reduced.laser_wavelength,
            "detuning_rule": reduced.detuning_rule,
        },
        "tables": {t.name: {"file": f"{t.name}.csv", "rows": len(t.rows)} for t in tables},
        "diagnostics": diagnostics,
        "timings_s": timings,
    }
    path = out_dir / f"manifest_{command}.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
