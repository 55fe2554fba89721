"""Squeezed-frame effective model of the mechanical modes.

The quartic mirror potential turns each mechanical mode into a squeezed
normal mode with transformed frequency Omega_j = w_j exp(2 r_j), reduced
coupling G'_j = G_j exp(-r_j) and an increased effective bath occupation.
Everything here is in units of omega_1.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

from .errors import InvalidParameterError, OverdampedRegimeError
from .params import ReducedParams
from .steady_state import SteadyState

# the two damping rates entering the dissipative swap dynamics
# chi1 = (kappa + gamma)/2, chi2 = (kappa - gamma)/2

_GAMMA_MATCH_RTOL = 1e-9


@dataclass(frozen=True)
class EffectiveModel:
    """Constants of the squeezed-frame dynamics (units of omega_1).

    Pairs are indexed (mirror 1, mirror 2). ``curly_g_sq`` is the square of
    the dissipative swap rate G'1^2 + G'2^2 + eta_e^2 - chi2^2; it may be
    negative (overdamped continuation), so the propagator treats its square
    root complex-safely.
    """

    r: tuple[float, float]
    mu: tuple[float, float]
    nu: tuple[float, float]
    Omega: tuple[float, float]
    Gp: tuple[float, float]
    n_th: tuple[float, float]
    n_r: tuple[float, float]
    gamma: float
    kappa: float
    eta_e: float
    chi1: float
    chi2: float
    curly_g_sq: float

    @property
    def curly_g(self) -> complex:
        """Complex-safe swap rate sqrt(G'1^2 + G'2^2 + eta^2 - chi2^2)."""
        return cmath.sqrt(complex(self.curly_g_sq, 0.0))

    @property
    def coupling_sq(self) -> float:
        """G'1^2 + G'2^2 + eta_e^2 (the lossless swap rate squared)."""
        return self.Gp[0] ** 2 + self.Gp[1] ** 2 + self.eta_e**2

    @property
    def n_osc(self) -> tuple[float, float]:
        """Amplitudes gamma sinh(2 r_j)(1 + 2 n_th_j) of the oscillating diffusion block."""
        return (
            self.gamma * math.sinh(2.0 * self.r[0]) * (1.0 + 2.0 * self.n_th[0]),
            self.gamma * math.sinh(2.0 * self.r[1]) * (1.0 + 2.0 * self.n_th[1]),
        )


def make_model(
    Gp: tuple[float, float],
    eta_e: float,
    kappa: float,
    gamma: float,
    r: tuple[float, float] = (0.0, 0.0),
    Omega: tuple[float, float] = (1.0, 1.0),
    n_th: tuple[float, float] = (0.0, 0.0),
) -> EffectiveModel:
    """Assemble a model directly from frame constants (mostly for tests and limits)."""
    mu = (math.cosh(r[0]), math.cosh(r[1]))
    nu = (math.sinh(r[0]), math.sinh(r[1]))
    n_r = tuple(
        (mu[j] ** 2 + nu[j] ** 2) * n_th[j] + nu[j] ** 2 for j in (0, 1)
    )
    chi1 = 0.5 * (kappa + gamma)
    chi2 = 0.5 * (kappa - gamma)
    return EffectiveModel(
        r=r,
        mu=mu,
        nu=nu,
        Omega=Omega,
        Gp=Gp,
        n_th=n_th,
        n_r=n_r,
        gamma=gamma,
        kappa=kappa,
        eta_e=eta_e,
        chi1=chi1,
        chi2=chi2,
        curly_g_sq=Gp[0] ** 2 + Gp[1] ** 2 + eta_e**2 - chi2**2,
    )


def build_effective(steady: SteadyState, params: ReducedParams) -> EffectiveModel:
    """Squeezed-frame constants at a converged operating point.

    The swap dynamics assumes a common damping rate for the atomic and
    mechanical modes; mismatched gamma inputs are rejected rather than
    silently averaged.
    """
    rs, Omegas, Gps = [], [], []
    for j in (0, 1):
        w = params.omega_m[j]
        x = 4.0 * steady.Lambda[j] / w
        if x <= -1.0:
            raise InvalidParameterError(
                f"enhanced Duffing parameter for mirror {j + 1} leaves the log branch "
                f"(4 Lambda/omega = {x!r} <= -1)"
            )
        r = 0.25 * math.log1p(x)
        rs.append(r)
        Omegas.append(w * math.exp(2.0 * r))
        Gps.append(steady.G[j] * math.exp(-r))

    gammas = (params.gamma_m[0], params.gamma_m[1], params.gamma_e)
    gmax, gmin = max(gammas), min(gammas)
    if gmax > 0.0 and (gmax - gmin) > _GAMMA_MATCH_RTOL * gmax:
        raise InvalidParameterError(
            "the swap dynamics requires gamma_1 = gamma_2 = gamma_e; "
            f"got {gammas}"
        )

    return make_model(
        Gp=(Gps[0], Gps[1]),
        eta_e=params.eta_e,
        kappa=params.kappa,
        gamma=params.gamma_m[0],
        r=(rs[0], rs[1]),
        Omega=(Omegas[0], Omegas[1]),
        n_th=params.n_th,
    )


def lossless(model: EffectiveModel) -> EffectiveModel:
    """Copy of the model with kappa = gamma = 0 (and hence no thermal load)."""
    base = replace(model, kappa=0.0, gamma=0.0, chi1=0.0, chi2=0.0)
    return replace(base, curly_g_sq=base.coupling_sq)


@dataclass(frozen=True)
class RwaDiagnostics:
    """Dimensionless validity ratios of the rotating-wave treatment."""

    coupling_ratio: float      # max_j G'_j / Omega_1
    noise_ratio: float         # max_j gamma mu_j nu_j (1 + 2 n_th_j) / Omega_1
    threshold: float
    rwa_ok: bool


def rwa_diagnostics(model: EffectiveModel, threshold: float = 0.1) -> RwaDiagnostics:
    """Check the two smallness conditions behind the rotating-wave dynamics.

    Both the transformed couplings and the oscillating part of the thermal
    drive must stay well below the transformed mechanical frequency.
    """
    omega1 = model.Omega[0]
    coupling = max(model.Gp[0], model.Gp[1], key=abs) / omega1
    noise = max(
        model.gamma * model.mu[j] * model.nu[j] * (1.0 + 2.0 * model.n_th[j])
        for j in (0, 1)
    ) / omega1
    coupling = abs(coupling)
    noise = abs(noise)
    return RwaDiagnostics(
        coupling_ratio=coupling,
        noise_ratio=noise,
        threshold=threshold,
        rwa_ok=(coupling < threshold and noise < threshold),
    )


def swap_time(model: EffectiveModel) -> float:
    """State-exchange time pi / sqrt(G'1^2 + G'2^2 + eta^2 - chi2^2), units 1/omega_1.

    Only defined in the underdamped regime; raises OverdampedRegimeError when
    the square root argument is nonpositive. The lossless variant follows from
    a model with kappa = gamma = 0 (see :func:`lossless`).
    """
    if model.curly_g_sq <= 0.0:
        raise OverdampedRegimeError(
            f"no swap time: curly_g^2 = {model.curly_g_sq!r} <= 0 (overdamped regime)"
        )
    return math.pi / math.sqrt(model.curly_g_sq)
