"""Headline observables: atomic quadrature squeezing and mechanical state transfer.

The squeezing experiments start every mode in its bare ground state, evolve
to the swap time and read the atomic quadrature variances. The transfer
experiment writes a displaced squeezed state on mirror 1, evolves to the
swap time and scores the mirror-2 output against the input with the
single-mode Gaussian fidelity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bogoliubov import EffectiveModel, build_effective, rwa_diagnostics, swap_time
from .dynamics import ground_state_covariance, propagate_covariance, propagator_closed
from .errors import (
    DegenerateCovarianceError,
    InvalidParameterError,
    NoOptimumError,
)
from .params import ReducedParams
from .steady_state import steady_state_for_g1

CASE_SINGLE = "i"    # mirror 2 fixed (G_2 = 0)
CASE_DOUBLE = "ii"   # both mirrors movable with equal coupling

FRAME_BOGOLIUBOV = "bogoliubov"
FRAME_BARE = "bare"

VACUUM_VARIANCE = 0.5
THREE_DB = 10.0 * math.log10(2.0)  # 50% noise reduction below vacuum


@dataclass(frozen=True)
class SqueezeReport:
    """Atomic quadrature variances at the swap time and the squeezing degree in dB."""

    var_x: float
    var_y: float
    d_yc: float
    t_s: float
    case: str
    rwa_ok: bool
    g1: float
    eta_e: float
    gp1: float


@dataclass(frozen=True)
class TransferReport:
    """Mirror-1 to mirror-2 transfer score and its heating/decay decomposition."""

    fidelity: float
    n_h: float
    lambda_h: float
    t_s: float
    mean_in: np.ndarray
    mean_fin: np.ndarray
    v_in: np.ndarray
    v_fin: np.ndarray
    frame: str
    rwa_ok: bool


def squeezing_degree(var_y: float) -> float:
    """Squeezing of a quadrature variance in dB relative to vacuum."""
    return -10.0 * math.log10(var_y / VACUUM_VARIANCE)


def initial_squeezed_block(rho: complex, xi: float, r1: float):
    """Moments of the displaced squeezed state written on mirror 1, squeezed frame.

    mean = (e^{r1} sqrt2 Re rho, e^{-r1} sqrt2 Im rho),
    cov  = diag(e^{2r1 - 2xi}, e^{-2r1 + 2xi}) / 2.
    The frame squeeze r1 partially cancels the written squeeze xi; xi = r1
    leaves exact vacuum in this frame.
    """
    rho = complex(rho)
    if not (math.isfinite(xi) and math.isfinite(r1)):
        raise InvalidParameterError("xi and r1 must be finite")
    if r1 < 0.0:
        raise InvalidParameterError(f"frame squeeze r1 must be >= 0, got {r1!r}")
    mean = np.array(
        [math.exp(r1) * math.sqrt(2.0) * rho.real, math.exp(-r1) * math.sqrt(2.0) * rho.imag]
    )
    cov = 0.5 * np.diag([math.exp(2.0 * r1 - 2.0 * xi), math.exp(-2.0 * r1 + 2.0 * xi)])
    return mean, cov


def gaussian_fidelity(mean_i, v_i, mean_f, v_f) -> tuple[float, float, float]:
    """Single-mode Gaussian transfer fidelity and its two noise parameters.

    Returns (F, n_h, lambda_h) with
        n_h      = sqrt(det(V_i + V_f)) - 1,
        lambda^2 = dx^T (sqrt(det S) S^{-1}) dx,  S = V_i + V_f,
        F        = exp(-lambda^2 / (1 + n_h)) / (1 + n_h).
    """
    v_i = np.asarray(v_i, dtype=float)
    v_f = np.asarray(v_f, dtype=float)
    mean_i = np.asarray(mean_i, dtype=float)
    mean_f = np.asarray(mean_f, dtype=float)
    if v_i.shape != (2, 2) or v_f.shape != (2, 2):
        raise InvalidParameterError("covariance blocks must be 2x2")
    for name, v in (("V_i", v_i), ("V_f", v_f)):
        if abs(v[0, 1] - v[1, 0]) > 1e-9 * max(1.0, float(np.max(np.abs(v)))):
            raise InvalidParameterError(f"{name} is not symmetric")

    s = v_i + v_f
    det_s = float(s[0, 0] * s[1, 1] - s[0, 1] * s[1, 0])
    if not math.isfinite(det_s) or det_s <= 0.0:
        raise DegenerateCovarianceError(
            f"covariance sum is singular or indefinite (det = {det_s!r})"
        )
    sqrt_det = math.sqrt(det_s)
    n_h = sqrt_det - 1.0

    dx = mean_f - mean_i
    # sqrt(det S) * S^{-1} applied between the displacement vectors
    s_inv_dx = np.array(
        [s[1, 1] * dx[0] - s[0, 1] * dx[1], -s[1, 0] * dx[0] + s[0, 0] * dx[1]]
    ) / det_s
    lambda_sq = sqrt_det * float(dx @ s_inv_dx)
    lambda_sq = max(lambda_sq, 0.0)

    fidelity = math.exp(-lambda_sq / (1.0 + n_h)) / (1.0 + n_h)
    return fidelity, n_h, math.sqrt(lambda_sq)


# ---------------------------------------------------------------------------
# atomic squeezing


def squeezing_from_model(
    model: EffectiveModel, method: str = "closed"
) -> tuple[float, float, float]:
    """(var_x, var_y, t_s) of the atomic mode at the swap time, all modes starting in ground states."""
    t_s = swap_time(model)
    v0 = ground_state_covariance(model)
    v = propagate_covariance(v0, model, t_s, method=method)
    return float(v[0, 0]), float(v[1, 1]), t_s


def _case_params(params: ReducedParams, case: str) -> ReducedParams:
    if case == CASE_SINGLE:
        return params.replace(g_single=(params.g_single[0], 0.0))
    if case == CASE_DOUBLE:
        return params.replace(g_single=(params.g_single[0], params.g_single[0]))
    raise InvalidParameterError(f"case must be 'i' or 'ii', got {case!r}")


def atomic_squeezing(
    params: ReducedParams,
    case: str,
    eta_e: float,
    g1: float,
    method: str = "closed",
) -> SqueezeReport:
    """Squeezing transferred to the atomic mode at the swap time.

    ``eta_e`` and ``g1`` (the targeted enhanced coupling G_1) are in units of
    omega_1. Case 'i' holds mirror 2 fixed; case 'ii' drives both mirrors at
    equal coupling. Raises OverdampedRegimeError when no swap time exists.
    """
    p = _case_params(params, case).replace(eta_e=eta_e)
    steady, _ = steady_state_for_g1(p, g1)
    model = build_effective(steady, p)
    var_x, var_y, t_s = squeezing_from_model(model, method=method)
    return SqueezeReport(
        var_x=var_x,
        var_y=var_y,
        d_yc=squeezing_degree(var_y),
        t_s=t_s,
        case=case,
        rwa_ok=rwa_diagnostics(model).rwa_ok,
        g1=g1,
        eta_e=eta_e,
        gp1=model.Gp[0],
    )


# ---------------------------------------------------------------------------
# mechanical state transfer


def transfer_from_model(
    model: EffectiveModel,
    rho: complex,
    xi: float,
    frame: str = FRAME_BOGOLIUBOV,
    method: str = "closed",
) -> TransferReport:
    """Transfer score at the swap time for a hand-built effective model.

    The input state lives on mirror 1 (squeezed-frame moments from
    :func:`initial_squeezed_block`); every other mode starts in its ground
    state. The mirror-2 output block is compared against the input, by
    default in the squeezed frame; ``frame='bare'`` undoes the frame squeeze
    on both blocks first.
    """
    if frame not in (FRAME_BOGOLIUBOV, FRAME_BARE):
        raise InvalidParameterError(f"unknown comparison frame {frame!r}")
    t_s = swap_time(model)
    mean_block, cov_block = initial_squeezed_block(rho, xi, model.r[0])

    mean0 = np.zeros(8)
    mean0[4:6] = mean_block
    v0 = ground_state_covariance(model)
    v0[4:6, 4:6] = cov_block

    mean_t = propagator_closed(model, t_s) @ mean0
    v_t = propagate_covariance(v0, model, t_s, method=method)

    mean_in, v_in = mean_block, cov_block
    mean_fin = mean_t[6:8]
    v_fin = v_t[6:8, 6:8]

    if frame == FRAME_BARE:
        d1 = np.diag([math.exp(-model.r[0]), math.exp(model.r[0])])
        d2 = np.diag([math.exp(-model.r[1]), math.exp(model.r[1])])
        mean_in, v_in = d1 @ mean_in, d1 @ v_in @ d1
        mean_fin, v_fin = d2 @ mean_fin, d2 @ v_fin @ d2

    fidelity, n_h, lambda_h = gaussian_fidelity(mean_in, v_in, mean_fin, v_fin)
    return TransferReport(
        fidelity=fidelity,
        n_h=n_h,
        lambda_h=lambda_h,
        t_s=t_s,
        mean_in=mean_in,
        mean_fin=mean_fin,
        v_in=v_in,
        v_fin=v_fin,
        frame=frame,
        rwa_ok=rwa_diagnostics(model).rwa_ok,
    )


def transfer_experiment(
    params: ReducedParams,
    rho: complex,
    xi: float,
    g1: float,
    frame: str = FRAME_BOGOLIUBOV,
    method: str = "closed",
) -> TransferReport:
    """Full transfer experiment at the operating point realizing G_1 = ``g1`` (units omega_1).

    Both mirrors are driven (g_2 = g_1); the drive power is back-solved so
    the self-consistent steady state gives the requested coupling.
    """
    p = _case_params(params, CASE_DOUBLE)
    steady, _ = steady_state_for_g1(p, g1)
    model = build_effective(steady, p)
    return transfer_from_model(model, rho, xi, frame=frame, method=method)


def optimal_coupling(
    params: ReducedParams,
    xi: float,
    bracket: tuple[float, float] = (1e-4, 2.0),
    tol: float = 1e-10,
) -> float:
    """Coupling G_1 (units omega_1) balancing frame squeeze against cavity loss.

    Root of f(G_1) = r_1(G_1) - xi - pi kappa / (2 curly_g(G_1)) by bisection
    over the bracket; r_1 and curly_g come from the self-consistent operating
    point realizing each G_1. In the overdamped region f is continued to
    -infinity (the loss term dominates). Raises NoOptimumError if the bracket
    shows no sign change.
    """
    if xi < 0.0:
        raise InvalidParameterError(f"xi must be >= 0, got {xi!r}")
    p = _case_params(params, CASE_DOUBLE)

    def f(g1: float) -> float:
        steady, _ = steady_state_for_g1(p, g1)
        model = build_effective(steady, p)
        if model.curly_g_sq <= 0.0:
            return -math.inf
        return model.r[0] - xi - math.pi * model.kappa / (2.0 * math.sqrt(model.curly_g_sq))

    lo, hi = bracket
    f_lo, f_hi = f(lo), f(hi)
    if not (f_lo < 0.0 < f_hi or f_hi < 0.0 < f_lo):
        raise NoOptimumError(
            f"no sign change of the optimality condition on [{lo}, {hi}]: "
            f"f(lo) = {f_lo!r}, f(hi) = {f_hi!r}",
            f_lo=f_lo,
            f_hi=f_hi,
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)
