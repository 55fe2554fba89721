"""Self-consistent steady state of the driven cavity with Duffing mirrors.

The operating point couples back on itself: the mirror displacements shift
the transformed mechanical frequency, which (under the resonant tuning rule)
sets the cavity and atomic detunings, which set the intracavity amplitude,
which drives the displacements. A damped fixed-point loop resolves it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, InvalidParameterError
from .params import DETUNING_FIXED, DETUNING_RESONANT, ReducedParams, power_for_drive

MAX_ITERATIONS = 1000
TOLERANCE = 1e-12
_BETA_DAMPING = 0.5  # underrelaxation on the displacement update; prevents oscillation


@dataclass(frozen=True)
class SteadyState:
    """Converged operating point, all values in units of omega_1.

    alpha_s is the intracavity amplitude, beta_s the mirror displacement
    amplitudes (mirror 1 positive, mirror 2 negative for nonzero drive),
    G the enhanced optomechanical couplings g_j * alpha_s and Lambda the
    enhanced Duffing parameters 3 lambda_j (1 + 4 beta_js^2).
    """

    alpha_s: float
    beta_s: tuple[float, float]
    Delta: float
    Delta_e: float
    G: tuple[float, float]
    Lambda: tuple[float, float]
    iterations: int
    residual: float


def solve_mirror_cubic(
    lambda_ratio: float,
    gamma_ratio: float,
    g_ratio: float,
    alpha_sq: float,
    mirror_index: int,
) -> float:
    """Unique real root of the mirror displacement cubic.

    16 (lambda/w) b^3 + (1 + 12 lambda/w + gamma^2/w^2) b + (-1)^j (g/w) a^2 = 0

    The cubic is strictly monotone for lambda >= 0, so exactly one real root
    exists. Solved in closed form (stable Cardano branch) plus one Newton
    polish step. Mirror 1 returns b > 0, mirror 2 returns b < 0 for a^2 > 0.
    """
    for name, v in (("lambda_ratio", lambda_ratio), ("gamma_ratio", gamma_ratio),
                    ("g_ratio", g_ratio), ("alpha_sq", alpha_sq)):
        if not math.isfinite(v):
            raise InvalidParameterError(f"{name} must be finite, got {v!r}")
    if lambda_ratio < 0.0:
        raise InvalidParameterError(f"lambda_ratio must be >= 0, got {lambda_ratio!r}")
    if mirror_index not in (1, 2):
        raise InvalidParameterError(f"mirror_index must be 1 or 2, got {mirror_index!r}")

    sign = -1.0 if mirror_index == 1 else 1.0
    lin = 1.0 + 12.0 * lambda_ratio + gamma_ratio * gamma_ratio
    const = sign * g_ratio * alpha_sq

    if lambda_ratio == 0.0:
        return -const / lin

    a3 = 16.0 * lambda_ratio
    beta_lin = -const / lin
    if a3 * beta_lin * beta_lin < 1e-3 * lin:
        # cubic term is a small perturbation (or underflows the Cardano
        # intermediates); Newton from the linear root converges quadratically
        root = beta_lin
        for _ in range(4):
            f = a3 * root**3 + lin * root + const
            df = 3.0 * a3 * root * root + lin
            root -= f / df
        return root

    # depressed cubic b^3 + p b + q = 0 with p > 0
    p = lin / a3
    q = const / a3
    if q == 0.0:
        return 0.0
    disc = math.sqrt((q / 2.0) ** 2 + (p / 3.0) ** 3)
    # avoid cancellation: take the cube root with the large magnitude first
    u = math.copysign(abs(-q / 2.0 - math.copysign(disc, q)) ** (1.0 / 3.0), -q)
    root = u - p / (3.0 * u)

    # single Newton step polishes the closed form to machine precision
    f = a3 * root**3 + lin * root + const
    df = 3.0 * a3 * root * root + lin
    root -= f / df
    return root


def intracavity_amplitude(
    Delta: float, Delta_e: float, eta_e: float, gamma_e: float, kappa: float, eps: float
) -> float:
    """Steady intracavity amplitude, atom ensemble included as a dispersive load.

    alpha_s = |eps| / sqrt((Delta - eta^2 De/(De^2+ge^2))^2 + (kappa + eta^2 ge/(De^2+ge^2))^2)
    """
    if not (kappa > 0.0):
        raise InvalidParameterError(f"kappa must be positive, got {kappa!r}")
    if eps == 0.0:
        return 0.0
    denom_sq = Delta_e * Delta_e + gamma_e * gamma_e
    if eta_e == 0.0 or denom_sq == 0.0:
        shift_re, shift_im = 0.0, 0.0
    else:
        shift_re = eta_e * eta_e * Delta_e / denom_sq
        shift_im = eta_e * eta_e * gamma_e / denom_sq
    return eps / math.hypot(Delta - shift_re, kappa + shift_im)


def _enhanced_duffing(duffing: tuple[float, float], beta: tuple[float, float]) -> tuple[float, float]:
    return (
        3.0 * duffing[0] * (1.0 + 4.0 * beta[0] * beta[0]),
        3.0 * duffing[1] * (1.0 + 4.0 * beta[1] * beta[1]),
    )


def _resonant_detuning(params: ReducedParams, Lambda: tuple[float, float]) -> float:
    # transformed frequency of mirror 1: Omega_1 = w_1 exp(2 r_1), r = log(1+4L/w)/4
    return params.omega_m[0] * math.sqrt(1.0 + 4.0 * Lambda[0] / params.omega_m[0])


def _detunings(params: ReducedParams, Lambda: tuple[float, float]) -> tuple[float, float]:
    if params.detuning_rule == DETUNING_FIXED:
        return params.detuning_fixed, params.detuning_fixed
    Delta = _resonant_detuning(params, Lambda)
    return Delta, Delta


def residuals(state: SteadyState, params: ReducedParams) -> tuple[float, float, float]:
    """Substitution residuals of the steady-state equations (amplitude, mirror 1, mirror 2)."""
    res_a = state.alpha_s - intracavity_amplitude(
        state.Delta, state.Delta_e, params.eta_e, params.gamma_e, params.kappa, params.eps
    )
    res_b = []
    a2 = state.alpha_s * state.alpha_s
    for j in (0, 1):
        lam = params.duffing[j] / params.omega_m[j]
        lin = 1.0 + 12.0 * lam + (params.gamma_m[j] / params.omega_m[j]) ** 2
        sign = -1.0 if j == 0 else 1.0
        res_b.append(
            16.0 * lam * state.beta_s[j] ** 3
            + lin * state.beta_s[j]
            + sign * (params.g_single[j] / params.omega_m[j]) * a2
        )
    return res_a, res_b[0], res_b[1]


def _rel_change(new: float, old: float) -> float:
    scale = max(abs(new), abs(old), 1.0)
    return abs(new - old) / scale


def solve_self_consistent(params: ReducedParams) -> SteadyState:
    """Solve the coupled operating-point equations under the detuning rule.

    Starts from undisplaced mirrors and iterates detuning -> amplitude ->
    displacements with underrelaxed displacement updates until the largest
    relative change falls below 1e-12. Raises ConvergenceError (carrying the
    last residual) after 1000 sweeps.
    """
    beta = (0.0, 0.0)
    alpha = 0.0
    Delta = Delta_e = params.omega_m[0]
    residual = math.inf

    for iteration in range(1, MAX_ITERATIONS + 1):
        Lambda = _enhanced_duffing(params.duffing, beta)
        Delta_new, Delta_e_new = _detunings(params, Lambda)
        alpha_new = intracavity_amplitude(
            Delta_new, Delta_e_new, params.eta_e, params.gamma_e, params.kappa, params.eps
        )
        a2 = alpha_new * alpha_new
        beta_raw = tuple(
            solve_mirror_cubic(
                params.duffing[j] / params.omega_m[j],
                params.gamma_m[j] / params.omega_m[j],
                params.g_single[j] / params.omega_m[j],
                a2,
                j + 1,
            )
            for j in (0, 1)
        )
        beta_new = tuple(
            (1.0 - _BETA_DAMPING) * beta[j] + _BETA_DAMPING * beta_raw[j] for j in (0, 1)
        )
        residual = max(
            _rel_change(alpha_new, alpha),
            _rel_change(beta_new[0], beta[0]),
            _rel_change(beta_new[1], beta[1]),
            _rel_change(Delta_new, Delta),
        )
        alpha, beta, Delta, Delta_e = alpha_new, beta_new, Delta_new, Delta_e_new
        if residual < TOLERANCE:
            # final pass without damping so the returned displacements satisfy
            # the cubic exactly at the converged amplitude
            beta = beta_raw
            Lambda = _enhanced_duffing(params.duffing, beta)
            return SteadyState(
                alpha_s=alpha,
                beta_s=beta,
                Delta=Delta,
                Delta_e=Delta_e,
                G=(params.g_single[0] * alpha, params.g_single[1] * alpha),
                Lambda=Lambda,
                iterations=iteration,
                residual=residual,
            )

    raise ConvergenceError(
        f"steady state did not converge in {MAX_ITERATIONS} iterations "
        f"(last relative change {residual:.3e})",
        residual=residual,
    )


def steady_state_for_g1(params: ReducedParams, g1_target: float) -> tuple[SteadyState, float]:
    """Operating point realizing a requested enhanced coupling G_1 (units of omega_1).

    The sweeps are parameterized by G_1 rather than drive power. Since the
    displacements depend only on alpha_s = G_1/g_1, the consistent operating
    point follows in a single pass and the required drive power is recovered
    in closed form. Returns (state, input_power_watts).
    """
    if not (params.g_single[0] > 0.0):
        raise InvalidParameterError("g_1 must be positive to target G_1")
    if g1_target < 0.0:
        raise InvalidParameterError(f"G_1 target must be >= 0, got {g1_target!r}")
    alpha = g1_target / params.g_single[0]
    a2 = alpha * alpha
    beta = tuple(
        solve_mirror_cubic(
            params.duffing[j] / params.omega_m[j],
            params.gamma_m[j] / params.omega_m[j],
            params.g_single[j] / params.omega_m[j],
            a2,
            j + 1,
        )
        for j in (0, 1)
    )
    Lambda = _enhanced_duffing(params.duffing, beta)
    Delta, Delta_e = _detunings(params, Lambda)
    denom_sq = Delta_e * Delta_e + params.gamma_e * params.gamma_e
    if params.eta_e == 0.0 or denom_sq == 0.0:
        shift_re, shift_im = 0.0, 0.0
    else:
        shift_re = params.eta_e**2 * Delta_e / denom_sq
        shift_im = params.eta_e**2 * params.gamma_e / denom_sq
    eps = alpha * math.hypot(Delta - shift_re, params.kappa + shift_im)
    power = power_for_drive(
        eps * params.omega1_si, params.kappa * params.omega1_si, params.omega_l * params.omega1_si
    )
    state = SteadyState(
        alpha_s=alpha,
        beta_s=beta,
        Delta=Delta,
        Delta_e=Delta_e,
        G=(params.g_single[0] * alpha, params.g_single[1] * alpha),
        Lambda=Lambda,
        iterations=1,
        residual=0.0,
    )
    return state, power
