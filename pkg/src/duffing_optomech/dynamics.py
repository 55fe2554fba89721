"""Gaussian dynamics of the eight quadratures.

Quadrature ordering, frozen throughout the package and 1-based in the
printed matrix entry names: (x_c, y_c, x_a, y_a, Q_1, P_1, Q_2, P_2) =
(atom, cavity, mirror 1, mirror 2), vacuum variance 1/2.

Two independent propagation routes are provided: the closed-form propagator
``propagator_closed`` (eleven analytic entry functions assembled into the
fixed sparsity pattern) with a Gauss-Legendre noise integral, and a direct
Runge-Kutta integration of the covariance equation dV/dt = A V + V A^T + N.
They cross-validate each other; the second can also include the oscillating
part of the thermal diffusion that the first neglects.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp

from .bogoliubov import EffectiveModel
from .errors import InvalidParameterError, QuadratureError, StiffnessError
from .params import ReducedParams
from .steady_state import SteadyState

FRAME_INTERACTION = "interaction-rwa"
FRAME_LAB = "lab-full"

_SIN_TAYLOR_CUT = 1e-4  # |curly_g * t| below this uses the series for sin(gt)/g


@dataclass(frozen=True)
class GaussianState:
    """First and second moments of the eight quadratures at one instant."""

    mean: np.ndarray = field(default_factory=lambda: np.zeros(8))
    cov: np.ndarray = field(default_factory=lambda: 0.5 * np.eye(8))
    time: float = 0.0
    frame: str = FRAME_INTERACTION

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float)
        cov = np.asarray(self.cov, dtype=float)
        if mean.shape != (8,):
            raise InvalidParameterError(f"mean must have shape (8,), got {mean.shape}")
        if cov.shape != (8, 8):
            raise InvalidParameterError(f"cov must have shape (8, 8), got {cov.shape}")
        if self.frame not in (FRAME_INTERACTION, FRAME_LAB):
            raise InvalidParameterError(f"unknown frame {self.frame!r}")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)


def symplectic_form() -> np.ndarray:
    """Block-diagonal symplectic form, [[0, 1], [-1, 0]] per mode."""
    omega = np.zeros((8, 8))
    for m in range(4):
        omega[2 * m, 2 * m + 1] = 1.0
        omega[2 * m + 1, 2 * m] = -1.0
    return omega


def symmetry_defect(V: np.ndarray) -> float:
    return float(np.max(np.abs(V - V.T)))


def symplectic_eig_floor(V: np.ndarray) -> float:
    """Smallest eigenvalue of V + (i/2) Omega; >= 0 for a physical Gaussian state."""
    herm = V + 0.5j * symplectic_form()
    return float(np.min(np.linalg.eigvalsh(herm)))


def purity_determinant(V: np.ndarray) -> float:
    """det(2V); equals 1 for a pure Gaussian state."""
    return float(np.linalg.det(2.0 * np.asarray(V)))


def is_physical(V: np.ndarray, sym_tol: float = 1e-12, eig_floor: float = -1e-9) -> bool:
    return symmetry_defect(V) < sym_tol and symplectic_eig_floor(V) >= eig_floor


def ground_state_covariance(model: EffectiveModel) -> np.ndarray:
    """Covariance of all modes in their bare ground states, written in the squeezed frame.

    The atom and cavity are vacuum; each bare mechanical vacuum appears
    squeezed by the frame transformation, diag(e^{2r}, e^{-2r})/2.
    """
    d = np.array(
        [
            0.5,
            0.5,
            0.5,
            0.5,
            0.5 * math.exp(2.0 * model.r[0]),
            0.5 * math.exp(-2.0 * model.r[0]),
            0.5 * math.exp(2.0 * model.r[1]),
            0.5 * math.exp(-2.0 * model.r[1]),
        ]
    )
    return np.diag(d)


# ---------------------------------------------------------------------------
# drift and diffusion


def drift_matrix(model: EffectiveModel) -> np.ndarray:
    """8x8 drift of the rotating-frame quadratures (20 structural nonzeros)."""
    g1, g2 = model.Gp
    eta = model.eta_e
    k, gam = model.kappa, model.gamma
    A = np.zeros((8, 8))
    A[0, 0] = A[1, 1] = -gam
    A[2, 2] = A[3, 3] = -k
    A[4, 4] = A[5, 5] = A[6, 6] = A[7, 7] = -gam
    A[0, 3] = eta
    A[1, 2] = -eta
    A[2, 1] = eta
    A[3, 0] = -eta
    A[2, 5] = -g1
    A[2, 7] = g2
    A[3, 4] = g1
    A[3, 6] = -g2
    A[4, 3] = -g1
    A[5, 2] = g1
    A[6, 3] = g2
    A[7, 2] = -g2
    return A


def diffusion_static(model: EffectiveModel) -> np.ndarray:
    """Diagonal of the time-independent diffusion matrix N_0."""
    gam, k = model.gamma, model.kappa
    m1 = gam * (1.0 + 2.0 * model.n_r[0])
    m2 = gam * (1.0 + 2.0 * model.n_r[1])
    return np.array([gam, gam, k, k, m1, m1, m2, m2])


def diffusion_oscillating(model: EffectiveModel, t: float) -> np.ndarray:
    """Oscillating part N_t of the diffusion matrix at time t.

    Nonzero only in the mechanical block; rotates at twice the transformed
    frequency of mirror 1 with amplitudes gamma sinh(2 r_j)(1 + 2 n_th_j).
    """
    n1, n2 = model.n_osc
    phase = 2.0 * model.Omega[0] * t
    c, s = math.cos(phase), math.sin(phase)
    N = np.zeros((8, 8))
    N[4, 4] = n1 * c
    N[5, 5] = -n1 * c
    N[4, 5] = N[5, 4] = n1 * s
    N[6, 6] = n2 * c
    N[7, 7] = -n2 * c
    N[6, 7] = N[7, 6] = n2 * s
    return N


# ---------------------------------------------------------------------------
# closed-form propagator


def _sin_over_g(g: complex, g_sq: float, t: np.ndarray) -> np.ndarray:
    """sin(g t)/g, real-valued for real g_sq, with a series branch near g t = 0."""
    out = np.empty_like(t)
    small = np.abs(g) * t < _SIN_TAYLOR_CUT
    if np.any(small):
        ts = t[small]
        x2 = g_sq * ts * ts
        out[small] = ts * (1.0 + x2 * (-1.0 / 6.0 + x2 / 120.0))
    if np.any(~small):
        tl = t[~small]
        out[~small] = (np.sin(g * tl) / g).real
    return out


def propagator_closed_batch(model: EffectiveModel, times: np.ndarray) -> np.ndarray:
    """Closed-form propagator M(t) for an array of times, shape (n, 8, 8).

    The entries are analytic in the swap rate, so the overdamped regime
    (curly_g^2 < 0) is reached by continuing the trigonometric functions to
    imaginary argument; everything stays real.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1:
        raise InvalidParameterError("times must be a 1-d array")
    if np.any(t < 0.0):
        raise InvalidParameterError("propagation times must be >= 0")

    g1, g2 = model.Gp
    eta = model.eta_e
    chi1, chi2 = model.chi1, model.chi2
    S = model.coupling_sq
    n = t.shape[0]
    M = np.zeros((n, 8, 8))

    ex1 = np.exp(-chi1 * t)
    if S == 0.0:
        # fully decoupled: plain damping of each mode
        eg = np.exp(-model.gamma * t)
        ek = np.exp(-model.kappa * t)
        for idx in (0, 1, 4, 5, 6, 7):
            M[:, idx, idx] = eg
        M[:, 2, 2] = ek
        M[:, 3, 3] = ek
        return M

    g = cmath.sqrt(complex(model.curly_g_sq, 0.0))
    ex2 = np.exp(chi2 * t)
    cosg = np.cos(g * t).real
    sing = _sin_over_g(g, model.curly_g_sq, t)

    common = cosg - ex2 + chi2 * sing
    m11 = ex1 * (ex2 * (g1 * g1 + g2 * g2) + eta * eta * cosg + eta * eta * chi2 * sing) / S
    m14 = ex1 * eta * sing
    m15 = -g1 * eta * ex1 * common / S
    m17 = g2 * eta * ex1 * common / S
    m33 = ex1 * (cosg - chi2 * sing)
    m36 = -ex1 * g1 * sing
    m38 = ex1 * g2 * sing
    m55 = ex1 * (ex2 * (eta * eta + g2 * g2) + g1 * g1 * cosg + g1 * g1 * chi2 * sing) / S
    m57 = -g1 * g2 * ex1 * common / S
    m77 = ex1 * (ex2 * (eta * eta + g1 * g1) + g2 * g2 * cosg + g2 * g2 * chi2 * sing) / S

    M[:, 0, 0] = m11
    M[:, 0, 3] = m14
    M[:, 0, 4] = m15
    M[:, 0, 6] = m17
    M[:, 1, 1] = m11
    M[:, 1, 2] = -m14
    M[:, 1, 5] = m15
    M[:, 1, 7] = m17
    M[:, 2, 1] = m14
    M[:, 2, 2] = m33
    M[:, 2, 5] = m36
    M[:, 2, 7] = m38
    M[:, 3, 0] = -m14
    M[:, 3, 3] = m33
    M[:, 3, 4] = -m36
    M[:, 3, 6] = -m38
    M[:, 4, 0] = m15
    M[:, 4, 3] = m36
    M[:, 4, 4] = m55
    M[:, 4, 6] = m57
    M[:, 5, 1] = m15
    M[:, 5, 2] = -m36
    M[:, 5, 5] = m55
    M[:, 5, 7] = m57
    M[:, 6, 0] = m17
    M[:, 6, 3] = m38
    M[:, 6, 4] = m57
    M[:, 6, 6] = m77
    M[:, 7, 1] = m17
    M[:, 7, 2] = -m38
    M[:, 7, 5] = m57
    M[:, 7, 7] = m77
    return M


def propagator_closed(model: EffectiveModel, t: float) -> np.ndarray:
    """Closed-form propagator M(t), shape (8, 8); M(0) is the identity."""
    if not (t >= 0.0):
        raise InvalidParameterError(f"propagation time must be >= 0, got {t!r}")
    return propagator_closed_batch(model, np.array([float(t)]))[0]


def evolve_mean(state: GaussianState, model: EffectiveModel, t: float) -> np.ndarray:
    """First moments at time t, mean(t) = M(t) mean(0). Rotating frame only."""
    if state.frame != FRAME_INTERACTION:
        raise InvalidParameterError(
            f"evolve_mean requires the {FRAME_INTERACTION!r} frame, got {state.frame!r}"
        )
    return propagator_closed(model, t) @ state.mean


# ---------------------------------------------------------------------------
# covariance propagation, closed-form route


@lru_cache(maxsize=32)
def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _symmetrize(V: np.ndarray) -> np.ndarray:
    return 0.5 * (V + V.T)


def evolve_cov_closed(
    V0: np.ndarray,
    model: EffectiveModel,
    t: float,
    tol: float = 1e-10,
    max_nodes: int = 2**14,
) -> np.ndarray:
    """Covariance at time t: V(t) = M V0 M^T + integral of M(tau) N0 M(tau)^T.

    The noise integral is evaluated by Gauss-Legendre quadrature with node
    doubling until two successive estimates agree to ``tol`` per entry
    (absolute). Raises QuadratureError if the node cap is hit first.
    """
    V0 = np.asarray(V0, dtype=float)
    if not (t >= 0.0):
        raise InvalidParameterError(f"propagation time must be >= 0, got {t!r}")
    if t == 0.0:
        return _symmetrize(V0.copy())
    M = propagator_closed(model, t)
    base = M @ V0 @ M.T

    n0 = diffusion_static(model)
    if not np.any(n0):
        return _symmetrize(base)

    prev = None
    n = 16
    diff = math.inf
    while n <= max_nodes:
        x, w = _leggauss(n)
        tau = 0.5 * t * (x + 1.0)
        wt = 0.5 * t * w
        Ms = propagator_closed_batch(model, tau)
        integral = np.einsum("nij,j,nkj,n->ik", Ms, n0, Ms, wt, optimize=True)
        if prev is not None:
            diff = float(np.max(np.abs(integral - prev)))
            if diff < tol:
                return _symmetrize(base + integral)
        prev = integral
        n *= 2
    raise QuadratureError(
        f"noise integral did not reach {tol:.1e} within {max_nodes} nodes "
        f"(achieved {diff:.3e})",
        achieved=diff,
    )


# ---------------------------------------------------------------------------
# covariance propagation, differential route


def lyapunov_ode(
    A: np.ndarray,
    noise,
    V0: np.ndarray,
    t: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> np.ndarray:
    """Integrate dV/dt = A V + V A^T + N(t) with adaptive Runge-Kutta 4(5).

    ``noise`` is a constant matrix or a callable tau -> matrix.
    """
    A = np.asarray(A, dtype=float)
    V0 = np.asarray(V0, dtype=float)
    if t == 0.0:
        return _symmetrize(V0.copy())
    if callable(noise):
        noise_at = noise
    else:
        N_const = np.asarray(noise, dtype=float)

        def noise_at(_tau: float) -> np.ndarray:
            return N_const

    dim = A.shape[0]

    def rhs(tau, y):
        V = y.reshape(dim, dim)
        dV = A @ V + V @ A.T + noise_at(tau)
        return dV.ravel()

    sol = solve_ivp(rhs, (0.0, t), V0.ravel(), method="RK45", rtol=rtol, atol=atol)
    if not sol.success:
        raise StiffnessError(f"covariance ODE integration failed: {sol.message}")
    return _symmetrize(sol.y[:, -1].reshape(dim, dim))


def evolve_cov_ode(
    V0: np.ndarray,
    model: EffectiveModel,
    t: float,
    include_nt: bool = False,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> np.ndarray:
    """Independent covariance propagation through the differential form.

    With ``include_nt`` the oscillating mechanical diffusion block is added
    to the static part, quantifying what the closed-form route neglects.
    """
    if not (t >= 0.0):
        raise InvalidParameterError(f"propagation time must be >= 0, got {t!r}")
    A = drift_matrix(model)
    N0 = np.diag(diffusion_static(model))
    if include_nt:
        def noise(tau: float) -> np.ndarray:
            return N0 + diffusion_oscillating(model, tau)
    else:
        noise = N0
    return lyapunov_ode(A, noise, V0, t, rtol=rtol, atol=atol)


def evolve_state(state: GaussianState, model: EffectiveModel, t: float) -> GaussianState:
    """Propagate a full Gaussian state (closed-form route for the covariance)."""
    mean = evolve_mean(state, model, t)
    cov = evolve_cov_closed(state.cov, model, t)
    return GaussianState(mean=mean, cov=cov, time=state.time + t, frame=state.frame)


COV_METHODS = ("closed", "ode", "ode-nt")


def propagate_covariance(
    V0: np.ndarray, model: EffectiveModel, t: float, method: str = "closed"
) -> np.ndarray:
    """Covariance propagation with a selectable route.

    ``closed`` uses the analytic propagator with the quadrature noise
    integral; ``ode`` integrates the differential form; ``ode-nt``
    additionally includes the oscillating thermal diffusion block.
    """
    if method == "closed":
        return evolve_cov_closed(V0, model, t)
    if method == "ode":
        return evolve_cov_ode(V0, model, t, include_nt=False)
    if method == "ode-nt":
        return evolve_cov_ode(V0, model, t, include_nt=True)
    raise InvalidParameterError(f"unknown covariance method {method!r}; expected one of {COV_METHODS}")


# ---------------------------------------------------------------------------
# pre-RWA laboratory-frame dynamics (validation route)


def lab_frame_drift(
    steady: SteadyState, model: EffectiveModel, params: ReducedParams
) -> np.ndarray:
    """Drift of the bare-mode quadratures with counter-rotating terms retained.

    Ordering (x_c, y_c, x_a, y_a, Q_1, P_1, Q_2, P_2) with *bare* mechanical
    quadratures; the quartic term stiffens the momentum equation so each
    mechanical block oscillates at omega_j e^{2 r_j}. Used to test where the
    rotating-wave treatment is trustworthy.
    """
    eta = params.eta_e
    k = params.kappa
    ge = params.gamma_e
    D, De = steady.Delta, steady.Delta_e
    G1, G2 = steady.G
    L1, L2 = steady.Lambda
    w1, w2 = params.omega_m
    gm1, gm2 = params.gamma_m

    A = np.zeros((8, 8))
    A[0, 0] = -ge
    A[0, 1] = De
    A[0, 3] = eta
    A[1, 0] = -De
    A[1, 1] = -ge
    A[1, 2] = -eta
    A[2, 1] = eta
    A[2, 2] = -k
    A[2, 3] = D
    A[3, 0] = -eta
    A[3, 2] = -D
    A[3, 3] = -k
    A[3, 4] = 2.0 * G1
    A[3, 6] = -2.0 * G2
    A[4, 4] = -gm1
    A[4, 5] = w1
    A[5, 2] = 2.0 * G1
    A[5, 4] = -(w1 + 4.0 * L1)
    A[5, 5] = -gm1
    A[6, 6] = -gm2
    A[6, 7] = w2
    A[7, 2] = -2.0 * G2
    A[7, 6] = -(w2 + 4.0 * L2)
    A[7, 7] = -gm2
    return A


def lab_frame_diffusion(params: ReducedParams) -> np.ndarray:
    """Diffusion for the laboratory-frame quadratures (thermal baths on bare modes)."""
    m1 = params.gamma_m[0] * (1.0 + 2.0 * params.n_th[0])
    m2 = params.gamma_m[1] * (1.0 + 2.0 * params.n_th[1])
    return np.diag(
        [params.gamma_e, params.gamma_e, params.kappa, params.kappa, m1, m1, m2, m2]
    )


def bogoliubov_scaling(model: EffectiveModel) -> np.ndarray:
    """Diagonal map from bare to squeezed mechanical quadratures."""
    return np.diag(
        [
            1.0,
            1.0,
            1.0,
            1.0,
            math.exp(model.r[0]),
            math.exp(-model.r[0]),
            math.exp(model.r[1]),
            math.exp(-model.r[1]),
        ]
    )


def frame_rotation(theta: float) -> np.ndarray:
    """Per-mode rotation undoing the common free evolution at angle theta."""
    c, s = math.cos(theta), math.sin(theta)
    R = np.zeros((8, 8))
    for m in range(4):
        R[2 * m, 2 * m] = c
        R[2 * m, 2 * m + 1] = -s
        R[2 * m + 1, 2 * m] = s
        R[2 * m + 1, 2 * m + 1] = c
    return R


def lab_to_interaction_cov(V_lab: np.ndarray, model: EffectiveModel, t: float) -> np.ndarray:
    """Express a laboratory-frame covariance in the rotating squeezed frame at time t."""
    U = frame_rotation(model.Omega[0] * t) @ bogoliubov_scaling(model)
    return U @ np.asarray(V_lab, dtype=float) @ U.T


# ---------------------------------------------------------------------------
# plain-text matrix serialization (debugging dumps)


def matrix_to_text(M: np.ndarray) -> str:
    """Row-major plain text: one line per row, entries space-separated.

    Entries are written with shortest round-trip precision, so parsing the
    text reproduces the matrix bit-exactly.
    """
    M = np.asarray(M, dtype=float)
    return "\n".join(" ".join(repr(float(v)) for v in row) for row in M) + "\n"


def matrix_from_text(text: str) -> np.ndarray:
    rows = [
        [float(tok) for tok in line.split()]
        for line in text.strip().splitlines()
        if line.strip()
    ]
    return np.array(rows, dtype=float)
