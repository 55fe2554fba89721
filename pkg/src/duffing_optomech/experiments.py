"""Named experiments behind the CLI: coupling sweeps, squeezing and transfer
curves, robustness scans, free-form parameter sweeps and the diagnostic suite.

Every experiment maps a deterministic list of points through a pure,
picklable point function (optionally on a process pool; result order is
restored by construction) and assembles long-format tables. Failed points
are flagged in-row and the run continues.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import observables as obs
from .bogoliubov import build_effective, lossless, make_model, rwa_diagnostics, swap_time
from .config import (
    SWEEP_CONTROL_KEYS,
    SWEEPABLE_SI_KEYS,
    config_to_params,
    parse_grid,
    parse_state_list,
)
from .dynamics import (
    drift_matrix,
    evolve_cov_closed,
    evolve_cov_ode,
    ground_state_covariance,
    propagator_closed,
    purity_determinant,
    symmetry_defect,
    symplectic_eig_floor,
)
from .errors import ConfigError, SimulationError
from .io import Table, reduced_comment_block
from .params import ReducedParams, SystemParams, reduce_params
from .steady_state import residuals, solve_mirror_cubic, solve_self_consistent, steady_state_for_g1

THREE_DB = obs.THREE_DB


@dataclass
class ExperimentResult:
    tables: list[Table] = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)
    n_failed: int = 0


def _map_points(fn, args_list, workers: int):
    if workers <= 1 or len(args_list) <= 1:
        return [fn(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, args_list, chunksize=max(1, len(args_list) // (4 * workers))))


def _golden_max(f, a: float, b: float, tol: float = 1e-6, maxiter: int = 200):
    """Golden-section maximization of a unimodal function on [a, b]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


# ---------------------------------------------------------------------------
# point functions (module level so they can cross a process pool)


def _fig2_point(args):
    params_si, power = args
    try:
        reduced = reduce_params(params_si.replace(input_power=power))
        steady = solve_self_consistent(reduced)
        model = build_effective(steady, reduced)
        diag = rwa_diagnostics(model)
        return (steady.G[0], model.Gp[0] / model.Omega[0], diag.rwa_ok, True)
    except SimulationError:
        return (math.nan, math.nan, False, False)


def _fig3_point(args):
    params_si, case, g1, method = args
    try:
        reduced = reduce_params(params_si)
        report = obs.atomic_squeezing(reduced, case, reduced.eta_e, g1, method=method)
        return (report.d_yc, report.rwa_ok, True)
    except SimulationError:
        return (math.nan, False, False)


def squeezing_peak(
    params_si: SystemParams,
    case: str,
    g1: float,
    eta_lo: float,
    eta_hi: float,
    coarse_points: int = 60,
    method: str = "closed",
    tol: float = 1e-6,
):
    """Maximum squeezing over the atom-coupling window, coarse grid plus
    golden-section refinement. Returns (eta_peak, d_peak, rwa_ok), eta in
    units of omega_1.

    The operating point does not depend on eta_e, so the steady state is
    solved once and only the swap dynamics is rebuilt per trial coupling.
    """
    reduced = reduce_params(params_si)
    p = obs._case_params(reduced, case)
    steady, _ = steady_state_for_g1(p, g1)
    base = build_effective(steady, p)
    rwa_ok = rwa_diagnostics(base).rwa_ok

    def degree(eta: float) -> float:
        model = make_model(
            Gp=base.Gp, eta_e=eta, kappa=base.kappa, gamma=base.gamma,
            r=base.r, Omega=base.Omega, n_th=base.n_th,
        )
        try:
            _, var_y, _ = obs.squeezing_from_model(model, method=method)
        except SimulationError:
            return -math.inf
        return obs.squeezing_degree(var_y)

    grid = np.linspace(eta_lo, eta_hi, coarse_points)
    values = [degree(e) for e in grid]
    i = int(np.argmax(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, coarse_points - 1)]
    eta_peak, d_peak = _golden_max(degree, lo, hi, tol=tol)
    if values[i] > d_peak:
        eta_peak, d_peak = float(grid[i]), values[i]
    return float(eta_peak), float(d_peak), rwa_ok


def _fig4_point(args):
    params_si, case, g1, eta_lo, eta_hi, coarse, method = args
    try:
        eta_peak, d_peak, rwa_ok = squeezing_peak(
            params_si, case, g1, eta_lo, eta_hi, coarse_points=coarse, method=method
        )
        return (d_peak, eta_peak, rwa_ok, True)
    except SimulationError:
        return (math.nan, math.nan, False, False)


def _transfer_point(args):
    params_si, g1, rho, xi, frame, method = args
    try:
        reduced = reduce_params(params_si)
        report = obs.transfer_experiment(reduced, rho, xi, g1, frame=frame, method=method)
        return (report.fidelity, report.n_h, report.lambda_h, report.t_s, report.rwa_ok, True)
    except SimulationError:
        return (math.nan, math.nan, math.nan, math.nan, False, False)


# ---------------------------------------------------------------------------
# figure experiments


def run_fig2(cfg: dict, workers: int = 1, method: str = "closed") -> ExperimentResult:
    """Enhanced coupling and transformed coupling versus drive power.

    Table fig2a sweeps without anharmonicity (G_1/omega_1), table fig2b with
    it (G'_1/Omega_1), for each configured single-photon coupling.
    """
    base = config_to_params(cfg)
    w1 = base.omega_m[0]
    g1_list = cfg["fig2_g1_list"]
    powers = np.concatenate([[0.0], parse_grid(cfg["fig2_power_grid"], "fig2_power_grid")])
    lam = cfg["fig2_duffing"]

    result = ExperimentResult()
    tables = {}
    for part, duffing in (("fig2a", (0.0, 0.0)),
                          ("fig2b", (lam * base.omega_m[0], lam * base.omega_m[1]))):
        value_col = "G1_over_omega1" if part == "fig2a" else "Gp1_over_Omega1"
        table = Table(
            name=part,
            columns=["input_power_W", "g1_over_omega1", value_col, "rwa_ok", "converged"],
            comment=reduced_comment_block(reduce_params(base)),
        )
        args = []
        for g1 in g1_list:
            params = base.replace(duffing=duffing, g_single=(g1 * w1, g1 * w1))
            args.extend((params, float(p)) for p in powers)
        out = _map_points(_fig2_point, args, workers)
        k = 0
        for g1 in g1_list:
            for p in powers:
                G1, gp_ratio, rwa_ok, converged = out[k]
                k += 1
                value = G1 if part == "fig2a" else gp_ratio
                table.rows.append((float(p), float(g1), value, rwa_ok, converged))
                result.n_failed += 0 if converged else 1
        tables[part] = table
    result.tables = [tables["fig2a"], tables["fig2b"]]
    result.diagnostics = {"powers": len(powers), "g1_values": list(map(float, g1_list))}
    return result


def run_fig3(cfg: dict, workers: int = 1, method: str = "closed") -> ExperimentResult:
    """Atomic squeezing degree versus atom-field coupling for both mirror cases."""
    base = config_to_params(cfg)
    w1 = base.omega_m[0]
    g1_list = cfg["fig3_g1_list"]
    etas = parse_grid(cfg["fig3_eta_grid"], "fig3_eta_grid")

    table = Table(
        name="fig3",
        columns=["eta_e_over_omega1", "squeeze_case", "G1_over_omega1",
                 "D_yc_dB", "three_db_limit_dB", "rwa_ok", "converged"],
        comment=reduced_comment_block(reduce_params(base)),
    )
    curves = [(g1, case) for g1 in g1_list for case in (obs.CASE_SINGLE, obs.CASE_DOUBLE)]
    args = [
        (base.replace(eta_e=float(eta) * w1), case, float(g1), method)
        for g1, case in curves
        for eta in etas
    ]
    out = _map_points(_fig3_point, args, workers)

    result = ExperimentResult()
    k = 0
    for g1, case in curves:
        for eta in etas:
            d_yc, rwa_ok, converged = out[k]
            k += 1
            table.rows.append((float(eta), case, float(g1), d_yc, THREE_DB, rwa_ok, converged))
            result.n_failed += 0 if converged else 1

    peaks = {}
    for g1, case in curves:
        eta_peak, d_peak, _ = squeezing_peak(
            base, case, float(g1), float(etas[0]), float(etas[-1]),
            coarse_points=min(60, len(etas)), method=method,
        )
        peaks[f"case_{case}_G1_{g1}"] = {"eta_peak": eta_peak, "d_peak_dB": d_peak}
    result.tables = [table]
    result.diagnostics = {"peaks": peaks, "grid_step": float(etas[1] - etas[0]) if len(etas) > 1 else 0.0}
    return result


def run_fig4(cfg: dict, workers: int = 1, method: str = "closed") -> ExperimentResult:
    """Peak squeezing versus cavity decay and versus bath temperature."""
    base = config_to_params(cfg)
    w1 = base.omega_m[0]
    g1_list = cfg["fig3_g1_list"]
    kappas = parse_grid(cfg["fig4_kappa_grid"], "fig4_kappa_grid")
    temps_mk = parse_grid(cfg["fig4_temperature_grid_mk"], "fig4_temperature_grid_mk")
    etas = parse_grid(cfg["fig3_eta_grid"], "fig3_eta_grid")
    eta_lo, eta_hi = float(etas[0]), float(etas[-1])
    coarse = cfg["fig4_eta_coarse_points"]

    curves = [(g1, case) for g1 in g1_list for case in (obs.CASE_SINGLE, obs.CASE_DOUBLE)]
    result = ExperimentResult()

    table_k = Table(
        name="fig4a",
        columns=["kappa_over_omega1", "squeeze_case", "G1_over_omega1",
                 "D_yc_peak_dB", "eta_peak_over_omega1", "rwa_ok", "converged"],
        comment=reduced_comment_block(reduce_params(base)),
    )
    args = [
        (base.replace(kappa=float(k) * w1), case, float(g1), eta_lo, eta_hi, coarse, method)
        for g1, case in curves
        for k in kappas
    ]
    out = _map_points(_fig4_point, args, workers)
    i = 0
    for g1, case in curves:
        for k in kappas:
            d_peak, eta_peak, rwa_ok, converged = out[i]
            i += 1
            table_k.rows.append((float(k), case, float(g1), d_peak, eta_peak, rwa_ok, converged))
            result.n_failed += 0 if converged else 1

    table_t = Table(
        name="fig4b",
        columns=["temperature_mK", "squeeze_case", "G1_over_omega1",
                 "D_yc_peak_dB", "eta_peak_over_omega1", "rwa_ok", "converged"],
        comment=reduced_comment_block(reduce_params(base)),
    )
    args = [
        (base.replace(temperature=(t * 1e-3, t * 1e-3)), case, float(g1),
         eta_lo, eta_hi, coarse, method)
        for g1, case in curves
        for t in temps_mk
    ]
    out = _map_points(_fig4_point, args, workers)
    i = 0
    for g1, case in curves:
        for t in temps_mk:
            d_peak, eta_peak, rwa_ok, converged = out[i]
            i += 1
            table_t.rows.append((float(t), case, float(g1), d_peak, eta_peak, rwa_ok, converged))
            result.n_failed += 0 if converged else 1

    result.tables = [table_k, table_t]
    result.diagnostics = {"kappa_points": len(kappas), "temperature_points": len(temps_mk)}
    return result


def run_fig5(cfg: dict, workers: int = 1, method: str = "closed",
             frame: str = obs.FRAME_BOGOLIUBOV) -> ExperimentResult:
    """Transfer fidelity, heating and amplitude decay versus enhanced coupling."""
    base = config_to_params(cfg)
    w1 = base.omega_m[0]
    params = base.replace(eta_e=cfg["fig5_eta_e"] * w1)
    states = parse_state_list(cfg["fig5_states"])
    g1_grid = parse_grid(cfg["fig5_g1_grid"], "fig5_g1_grid")

    table = Table(
        name="fig5",
        columns=["G1_over_omega1", "rho_re", "rho_im", "xi",
                 "fidelity", "n_h", "lambda_h", "t_s", "rwa_ok", "converged"],
        comment=reduced_comment_block(reduce_params(params)),
    )
    args = [
        (params, float(g1), rho, xi, frame, method)
        for rho, xi in states
        for g1 in g1_grid
    ]
    out = _map_points(_transfer_point, args, workers)

    result = ExperimentResult()
    k = 0
    argmax = {}
    for rho, xi in states:
        best = (-math.inf, math.nan)
        for g1 in g1_grid:
            fid, n_h, lam_h, t_s, rwa_ok, converged = out[k]
            k += 1
            table.rows.append((float(g1), rho.real, rho.imag, xi,
                               fid, n_h, lam_h, t_s, rwa_ok, converged))
            result.n_failed += 0 if converged else 1
            if converged and fid > best[0]:
                best = (fid, float(g1))
        argmax[f"rho_{rho}_xi_{xi}"] = {"fidelity_max": best[0], "g1_argmax": best[1]}
    result.tables = [table]
    result.diagnostics = {"argmax": argmax}
    return result


def run_fig6(cfg: dict, workers: int = 1, method: str = "closed",
             frame: str = obs.FRAME_BOGOLIUBOV) -> ExperimentResult:
    """Transfer fidelity robustness against cavity decay, atom coupling and temperature."""
    base = config_to_params(cfg)
    w1 = base.omega_m[0]
    params = base.replace(eta_e=cfg["fig5_eta_e"] * w1)
    rho, xi = cfg["fig6_rho"], cfg["fig6_xi"]
    g1_list = [float(g) for g in cfg["fig6_g1_list"]]
    baseline_g1 = float(cfg["fig6_baseline_g1"])

    # curve list: anharmonic curves then the lambda = 0 baseline
    curves = [(g1, True) for g1 in g1_list] + [(baseline_g1, False)]

    def curve_params(p: SystemParams, anharmonic: bool) -> SystemParams:
        return p if anharmonic else p.replace(duffing=(0.0, 0.0))

    panels = [
        ("fig6a", "kappa_over_omega1", parse_grid(cfg["fig6_kappa_grid"], "fig6_kappa_grid"),
         lambda v: params.replace(kappa=float(v) * w1)),
        ("fig6b", "eta_e_over_omega1", parse_grid(cfg["fig6_eta_grid"], "fig6_eta_grid"),
         lambda v: params.replace(eta_e=float(v) * w1)),
        ("fig6c", "temperature_mK", parse_grid(cfg["fig6_temperature_grid_mk"], "fig6_temperature_grid_mk"),
         lambda v: params.replace(temperature=(float(v) * 1e-3, float(v) * 1e-3))),
    ]

    result = ExperimentResult()
    for name, axis_col, grid, apply_axis in panels:
        table = Table(
            name=name,
            columns=[axis_col, "G1_over_omega1", "anharmonic",
                     "fidelity", "n_h", "lambda_h", "rwa_ok", "converged"],
            comment=reduced_comment_block(reduce_params(params)),
        )
        args = [
            (curve_params(apply_axis(v), anharmonic), g1, rho, xi, frame, method)
            for g1, anharmonic in curves
            for v in grid
        ]
        out = _map_points(_transfer_point, args, workers)
        k = 0
        for g1, anharmonic in curves:
            for v in grid:
                fid, n_h, lam_h, _t_s, rwa_ok, converged = out[k]
                k += 1
                table.rows.append((float(v), g1, anharmonic, fid, n_h, lam_h, rwa_ok, converged))
                result.n_failed += 0 if converged else 1
        result.tables.append(table)
    result.diagnostics = {"state": {"rho": str(rho), "xi": xi}, "curves": [list(c) for c in curves]}
    return result


# ---------------------------------------------------------------------------
# free-form sweep


class _PointEvaluator:
    """Lazy per-point computation shared by the sweep observables."""

    def __init__(self, params_si: SystemParams, g1_target: float | None,
                 rho: complex, xi: float, frame: str, method: str):
        self.params_si = params_si
        self.g1_target = g1_target
        self.rho = rho
        self.xi = xi
        self.frame = frame
        self.method = method
        self._cache: dict = {}

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def reduced(self) -> ReducedParams:
        return self._get("reduced", lambda: reduce_params(self.params_si))

    @property
    def steady(self):
        def build():
            if self.g1_target is not None:
                return steady_state_for_g1(self.reduced, self.g1_target)[0]
            return solve_self_consistent(self.reduced)
        return self._get("steady", build)

    @property
    def power(self) -> float:
        if self.g1_target is None:
            return self.reduced.input_power
        return self._get("power", lambda: steady_state_for_g1(self.reduced, self.g1_target)[1])

    @property
    def model(self):
        return self._get("model", lambda: build_effective(self.steady, self.reduced))

    @property
    def g1_effective(self) -> float:
        return self.g1_target if self.g1_target is not None else self.steady.G[0]

    def squeeze(self, case: str):
        return self._get(
            f"squeeze_{case}",
            lambda: obs.atomic_squeezing(
                self.reduced, case, self.reduced.eta_e, self.g1_effective, method=self.method
            ),
        )

    @property
    def transfer(self):
        return self._get(
            "transfer",
            lambda: obs.transfer_experiment(
                self.reduced, self.rho, self.xi, self.g1_effective,
                frame=self.frame, method=self.method,
            ),
        )


OBSERVABLES = {
    "alpha_s": lambda ev: ev.steady.alpha_s,
    "beta_1": lambda ev: ev.steady.beta_s[0],
    "beta_2": lambda ev: ev.steady.beta_s[1],
    "Delta_over_omega1": lambda ev: ev.steady.Delta,
    "G1_over_omega1": lambda ev: ev.steady.G[0],
    "G2_over_omega1": lambda ev: ev.steady.G[1],
    "Lambda_1_over_omega1": lambda ev: ev.steady.Lambda[0],
    "Lambda_2_over_omega1": lambda ev: ev.steady.Lambda[1],
    "input_power_W": lambda ev: ev.power,
    "r_1": lambda ev: ev.model.r[0],
    "r_2": lambda ev: ev.model.r[1],
    "Omega_1_over_omega1": lambda ev: ev.model.Omega[0],
    "Gp1_over_omega1": lambda ev: ev.model.Gp[0],
    "Gp2_over_omega1": lambda ev: ev.model.Gp[1],
    "Gp1_over_Omega1": lambda ev: ev.model.Gp[0] / ev.model.Omega[0],
    "n_th_1": lambda ev: ev.model.n_th[0],
    "n_th_2": lambda ev: ev.model.n_th[1],
    "n_r_1": lambda ev: ev.model.n_r[0],
    "n_r_2": lambda ev: ev.model.n_r[1],
    "curly_g_sq": lambda ev: ev.model.curly_g_sq,
    "t_s": lambda ev: swap_time(ev.model),
    "rwa_coupling_ratio": lambda ev: rwa_diagnostics(ev.model).coupling_ratio,
    "rwa_noise_ratio": lambda ev: rwa_diagnostics(ev.model).noise_ratio,
    "D_yc_case_i": lambda ev: ev.squeeze(obs.CASE_SINGLE).d_yc,
    "D_yc_case_ii": lambda ev: ev.squeeze(obs.CASE_DOUBLE).d_yc,
    "fidelity": lambda ev: ev.transfer.fidelity,
    "n_h": lambda ev: ev.transfer.n_h,
    "lambda_h": lambda ev: ev.transfer.lambda_h,
}


def _apply_axis(params: SystemParams, name: str, value: float) -> SystemParams:
    pairs = {
        "omega_m_1": ("omega_m", 0), "omega_m_2": ("omega_m", 1),
        "gamma_m_1": ("gamma_m", 0), "gamma_m_2": ("gamma_m", 1),
        "duffing_1": ("duffing", 0), "duffing_2": ("duffing", 1),
        "g_single_1": ("g_single", 0), "g_single_2": ("g_single", 1),
        "temperature_1": ("temperature", 0), "temperature_2": ("temperature", 1),
    }
    if name in pairs:
        fieldname, idx = pairs[name]
        current = list(getattr(params, fieldname))
        current[idx] = value
        return params.replace(**{fieldname: tuple(current)})
    if name in ("kappa", "eta_e", "gamma_e", "laser_wavelength", "input_power"):
        return params.replace(**{name: value})
    raise ConfigError(f"unknown sweep axis {name!r}")


def _sweep_point(args):
    params_si, g1_target, rho, xi, frame, method, names = args
    ev = _PointEvaluator(params_si, g1_target, rho, xi, frame, method)
    values = []
    rwa_ok = False
    converged = True
    try:
        for name in names:
            values.append(OBSERVABLES[name](ev))
        rwa_ok = rwa_diagnostics(ev.model).rwa_ok
    except SimulationError:
        values = [math.nan] * len(names)
        converged = False
    return (*values, rwa_ok, converged)


def run_sweep(cfg: dict, workers: int = 1, method: str = "closed",
              frame: str = obs.FRAME_BOGOLIUBOV) -> ExperimentResult:
    """Cartesian sweep over declared axes, long-format output.

    Axes iterate lexicographically in declaration order (first axis
    outermost). An empty axis list produces a single row at the base
    parameters. Unknown observables are rejected before any computation.
    """
    base = config_to_params(cfg)
    axes = cfg["sweep_axes"]
    names = cfg["sweep_observables"]
    if not names:
        raise ConfigError("sweep_observables must name at least one observable")
    unknown = [n for n in names if n not in OBSERVABLES]
    if unknown:
        raise ConfigError(f"unknown observable names: {unknown}; "
                          f"known: {sorted(OBSERVABLES)}")
    for axis in axes:
        if axis not in SWEEPABLE_SI_KEYS + SWEEP_CONTROL_KEYS:
            raise ConfigError(f"unknown sweep axis {axis!r}")
        if axis not in cfg["_sweep_grids"]:
            raise ConfigError(f"missing sweep_grid_{axis}")
    grids = [parse_grid(cfg["_sweep_grids"][axis], f"sweep_grid_{axis}") for axis in axes]

    rho, xi = cfg["sweep_rho"], cfg["sweep_xi"]
    points: list[tuple] = [()]
    for grid in grids:
        points = [p + (float(v),) for p in points for v in grid]

    args_list = []
    for point in points:
        params = base
        g1_target = None
        for axis, value in zip(axes, point):
            if axis == "G1_target":
                g1_target = value
            else:
                params = _apply_axis(params, axis, value)
        args_list.append((params, g1_target, rho, xi, frame, method, tuple(names)))

    out = _map_points(_sweep_point, args_list, workers)

    table = Table(
        name="sweep",
        columns=list(axes) + list(names) + ["rwa_ok", "converged"],
        comment=reduced_comment_block(reduce_params(base))
        + [f"axes: {', '.join(axes) if axes else '(none)'}"],
    )
    result = ExperimentResult()
    for point, row in zip(points, out):
        table.rows.append(point + row)
        result.n_failed += 0 if row[-1] else 1
    result.tables = [table]
    result.diagnostics = {"axes": {a: len(g) for a, g in zip(axes, grids)}, "rows": len(points)}
    return result


# ---------------------------------------------------------------------------
# diagnostic suite


def run_check(cfg: dict, workers: int = 1, method: str = "closed") -> ExperimentResult:
    """Numerical identity checks and physicality diagnostics at the base parameters.

    Emits one (name, status, detail) row per check; status is PASS/FAIL for
    identity checks and INFO for regime reports.
    """
    del workers  # single-point diagnostics
    base = config_to_params(cfg)
    reduced = reduce_params(base)
    rows: list[tuple] = []
    failed = 0

    def record(name: str, ok: bool | None, detail: str):
        nonlocal failed
        status = "INFO" if ok is None else ("PASS" if ok else "FAIL")
        if ok is False:
            failed += 1
        rows.append((name, status, detail))

    steady = solve_self_consistent(reduced)
    res = residuals(steady, reduced)
    worst = max(abs(r) for r in res)
    record("steady-state residual", worst < 1e-10,
           f"max |residual| = {worst:.3e} after {steady.iterations} iterations")

    # cubic solver against a bisection bracket
    lam, gam, g, a2 = 1e-4, 1e-5, 6.07e-4, steady.alpha_s**2
    root = solve_mirror_cubic(lam, gam, g, a2, 1)
    lo, hi = 0.0, g * a2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 16 * lam * mid**3 + (1 + 12 * lam + gam * gam) * mid - g * a2 > 0:
            hi = mid
        else:
            lo = mid
    record("cubic root vs bisection", abs(root - 0.5 * (lo + hi)) < 1e-9,
           f"|closed-form - bisection| = {abs(root - 0.5 * (lo + hi)):.3e}")

    model = build_effective(steady, reduced)
    t_s = swap_time(model)
    A = drift_matrix(model)
    worst_m = 0.0
    for t in np.linspace(0.0, 1.5 * t_s, 7)[1:]:
        worst_m = max(worst_m, float(np.max(np.abs(propagator_closed(model, t) - expm(A * t)))))
    record("propagator vs matrix exponential", worst_m < 1e-9, f"max entry diff = {worst_m:.3e}")

    v0 = ground_state_covariance(model)
    v_closed = evolve_cov_closed(v0, model, t_s)
    v_ode = evolve_cov_ode(v0, model, t_s, rtol=1e-12, atol=1e-13)
    diff = float(np.max(np.abs(v_closed - v_ode)))
    record("closed-form vs ODE covariance", diff < 1e-7, f"max entry diff = {diff:.3e}")

    sym = symmetry_defect(v_closed)
    floor = symplectic_eig_floor(v_closed)
    record("covariance physicality", sym < 1e-12 and floor > -1e-9,
           f"symmetry defect = {sym:.3e}, symplectic floor = {floor:.3e}")

    free = lossless(model)
    drift_p = abs(purity_determinant(evolve_cov_closed(v0, free, swap_time(free))) - 1.0)
    record("lossless purity conservation", drift_p < 1e-8, f"|det(2V) - 1| = {drift_p:.3e}")

    diag = rwa_diagnostics(model)
    record("rotating-wave validity", None,
           f"coupling ratio = {diag.coupling_ratio:.3e}, noise ratio = {diag.noise_ratio:.3e}, "
           f"ok = {diag.rwa_ok}")

    v_nt = evolve_cov_ode(v0, model, t_s, include_nt=True, rtol=1e-10)
    v_n0 = evolve_cov_ode(v0, model, t_s, include_nt=False, rtol=1e-10)
    nt_effect = float(np.max(np.abs(v_nt - v_n0)))
    record("oscillating-diffusion neglect", None,
           f"max covariance shift = {nt_effect:.3e} (vacuum variance 0.5)")

    table = Table(
        name="check",
        columns=["check", "status", "detail"],
        rows=rows,
        comment=reduced_comment_block(reduced),
    )
    return ExperimentResult(tables=[table], diagnostics={"failed": failed}, n_failed=failed)
