"""Physical inputs and unit reduction.

All dynamics in this package run in units of the first mechanical frequency:
rates are divided by omega_1 and times are measured in 1/omega_1. Raw inputs
are SI (rad/s, kelvin, watts, meters); :func:`reduce_params` converts them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .errors import InvalidParameterError

# CODATA 2018 (h and k_B exact by definition, hbar derived in double precision)
PLANCK_H = 6.62607015e-34          # J s
HBAR = PLANCK_H / (2.0 * math.pi)  # J s
K_BOLTZMANN = 1.380649e-23         # J / K
C_LIGHT = 299792458.0              # m / s

DETUNING_RESONANT = "resonant"
DETUNING_FIXED = "fixed"

# mechanical quality factor below this is outside the high-Q regime the
# model assumes; we warn rather than refuse
_MIN_QUALITY = 1e3


@dataclass(frozen=True)
class SystemParams:
    """Raw physical inputs in SI units.

    Pairs are indexed (mirror 1, mirror 2). The detuning rule selects how the
    cavity/atom detunings are fixed: ``resonant`` ties them to the transformed
    mechanical frequency (the operating point used throughout), ``fixed``
    uses ``detuning_fixed`` for both.
    """

    omega_m: tuple[float, float]        # mechanical angular frequencies (rad/s)
    gamma_m: tuple[float, float]        # mechanical damping rates (rad/s)
    duffing: tuple[float, float]        # Duffing parameters (rad/s, >= 0)
    g_single: tuple[float, float]       # single-photon optomechanical couplings (rad/s)
    kappa: float                        # cavity amplitude decay (rad/s)
    eta_e: float                        # enhanced atom-field coupling (rad/s)
    gamma_e: float                      # atomic decay (rad/s)
    temperature: tuple[float, float]    # bath temperatures (K)
    laser_wavelength: float             # m
    input_power: float                  # W
    detuning_rule: str = DETUNING_RESONANT
    detuning_fixed: float | None = None  # rad/s, used when detuning_rule == "fixed"

    def __post_init__(self):
        strict_positive = {
            "omega_m[0]": self.omega_m[0],
            "omega_m[1]": self.omega_m[1],
            "gamma_m[0]": self.gamma_m[0],
            "gamma_m[1]": self.gamma_m[1],
            "kappa": self.kappa,
            "gamma_e": self.gamma_e,
            "laser_wavelength": self.laser_wavelength,
        }
        for name, value in strict_positive.items():
            if not (value > 0.0) or not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be strictly positive, got {value!r}")
        nonnegative = {
            "duffing[0]": self.duffing[0],
            "duffing[1]": self.duffing[1],
            "g_single[0]": self.g_single[0],
            "g_single[1]": self.g_single[1],
            "eta_e": self.eta_e,
            "temperature[0]": self.temperature[0],
            "temperature[1]": self.temperature[1],
            "input_power": self.input_power,
        }
        for name, value in nonnegative.items():
            if value < 0.0 or not math.isfinite(value):
                raise InvalidParameterError(f"{name} must be >= 0, got {value!r}")
        if self.detuning_rule not in (DETUNING_RESONANT, DETUNING_FIXED):
            raise InvalidParameterError(f"unknown detuning_rule {self.detuning_rule!r}")
        if self.detuning_rule == DETUNING_FIXED and self.detuning_fixed is None:
            raise InvalidParameterError("detuning_rule 'fixed' requires detuning_fixed")
        for j in (0, 1):
            q = self.omega_m[j] / self.gamma_m[j]
            if q < _MIN_QUALITY:
                warnings.warn(
                    f"mechanical quality factor omega/gamma = {q:.3g} for mirror {j + 1} "
                    f"is below {_MIN_QUALITY:.0e}; the model assumes a high-Q oscillator",
                    stacklevel=2,
                )

    def replace(self, **changes) -> "SystemParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class ReducedParams:
    """All rates of :class:`SystemParams` divided by omega_1 (dimensionless).

    Keeps enough SI anchors (omega1_si, wavelength, power, temperatures) for
    the round trip back to SI and for thermal occupations, which depend on
    absolute frequency and temperature.
    """

    omega_m: tuple[float, float]     # (1.0, omega_2/omega_1)
    gamma_m: tuple[float, float]
    duffing: tuple[float, float]
    g_single: tuple[float, float]
    kappa: float
    eta_e: float
    gamma_e: float
    n_th: tuple[float, float]        # thermal phonon occupations (dimensionless)
    eps: float                       # drive amplitude |eps| / omega_1
    omega_l: float                   # laser angular frequency / omega_1
    temperature: tuple[float, float]  # K
    omega1_si: float                 # rad/s
    laser_wavelength: float          # m
    input_power: float               # W
    detuning_rule: str = DETUNING_RESONANT
    detuning_fixed: float | None = None  # units of omega_1

    def to_si(self) -> SystemParams:
        w1 = self.omega1_si
        return SystemParams(
            omega_m=(self.omega_m[0] * w1, self.omega_m[1] * w1),
            gamma_m=(self.gamma_m[0] * w1, self.gamma_m[1] * w1),
            duffing=(self.duffing[0] * w1, self.duffing[1] * w1),
            g_single=(self.g_single[0] * w1, self.g_single[1] * w1),
            kappa=self.kappa * w1,
            eta_e=self.eta_e * w1,
            gamma_e=self.gamma_e * w1,
            temperature=self.temperature,
            laser_wavelength=self.laser_wavelength,
            input_power=self.input_power,
            detuning_rule=self.detuning_rule,
            detuning_fixed=None if self.detuning_fixed is None else self.detuning_fixed * w1,
        )

    def replace(self, **changes) -> "ReducedParams":
        return replace(self, **changes)


def drive_amplitude(power: float, kappa: float, omega_l: float) -> float:
    """Laser drive amplitude |eps| = sqrt(2 kappa P / (hbar omega_L)) in rad/s.

    All arguments SI. Zero power gives exactly zero.
    """
    if power < 0.0 or not math.isfinite(power):
        raise InvalidParameterError(f"input power must be >= 0, got {power!r}")
    if not (kappa > 0.0) or not (omega_l > 0.0):
        raise InvalidParameterError("kappa and omega_l must be positive")
    if power == 0.0:
        return 0.0
    return math.sqrt(2.0 * kappa * power / (HBAR * omega_l))


def power_for_drive(eps: float, kappa: float, omega_l: float) -> float:
    """Inverse of :func:`drive_amplitude`: input power (W) realizing |eps| (rad/s)."""
    if eps < 0.0:
        raise InvalidParameterError(f"drive amplitude must be >= 0, got {eps!r}")
    return eps * eps * HBAR * omega_l / (2.0 * kappa)


def thermal_occupation(omega: float, temperature: float) -> float:
    """Mean thermal phonon number [exp(hbar omega / k_B T) - 1]^-1.

    Evaluated with expm1 so the classical limit hbar*omega << k_B*T does not
    lose precision. T = 0 returns exactly 0.
    """
    if not (omega > 0.0):
        raise InvalidParameterError(f"omega must be positive, got {omega!r}")
    if temperature < 0.0:
        raise InvalidParameterError(f"temperature must be >= 0, got {temperature!r}")
    if temperature == 0.0:
        return 0.0
    x = HBAR * omega / (K_BOLTZMANN * temperature)
    if x > 700.0:  # exp overflow; occupation is zero to double precision anyway
        return 0.0
    return 1.0 / math.expm1(x)


def laser_frequency(wavelength: float) -> float:
    """Angular frequency 2 pi c / lambda (rad/s)."""
    if not (wavelength > 0.0):
        raise InvalidParameterError(f"wavelength must be positive, got {wavelength!r}")
    return 2.0 * math.pi * C_LIGHT / wavelength


def reduce_params(params: SystemParams) -> ReducedParams:
    """Convert SI inputs to the internal unit system (rates in omega_1, time in 1/omega_1)."""
    w1 = params.omega_m[0]
    if not (w1 > 0.0):
        raise InvalidParameterError(f"omega_1 must be positive, got {w1!r}")
    omega_l = laser_frequency(params.laser_wavelength)
    eps = drive_amplitude(params.input_power, params.kappa, omega_l)
    n_th = (
        thermal_occupation(params.omega_m[0], params.temperature[0]),
        thermal_occupation(params.omega_m[1], params.temperature[1]),
    )
    return ReducedParams(
        omega_m=(1.0, params.omega_m[1] / w1),
        gamma_m=(params.gamma_m[0] / w1, params.gamma_m[1] / w1),
        duffing=(params.duffing[0] / w1, params.duffing[1] / w1),
        g_single=(params.g_single[0] / w1, params.g_single[1] / w1),
        kappa=params.kappa / w1,
        eta_e=params.eta_e / w1,
        gamma_e=params.gamma_e / w1,
        n_th=n_th,
        eps=eps / w1,
        omega_l=omega_l / w1,
        temperature=params.temperature,
        omega1_si=w1,
        laser_wavelength=params.laser_wavelength,
        input_power=params.input_power,
        detuning_rule=params.detuning_rule,
        detuning_fixed=None if params.detuning_fixed is None else params.detuning_fixed / w1,
    )


def default_params(**overrides) -> SystemParams:
    """Baseline experimentally-motivated parameter set used by the bundled experiments.

    omega_1 = omega_2 = 2 pi x 5 MHz, kappa = pi x 1e5 /s (0.01 omega_1),
    gamma_1 = gamma_2 = gamma_e = 1e-5 omega_1, Duffing 1e-4 omega_j,
    g_1 = g_2 = 6.07e-4 omega_1, eta_e = 0.3 omega_1, T = 25 mK, 810 nm drive.
    Any field can be overridden by keyword.
    """
    w1 = 2.0 * math.pi * 5.0e6
    base = dict(
        omega_m=(w1, w1),
        gamma_m=(1e-5 * w1, 1e-5 * w1),
        duffing=(1e-4 * w1, 1e-4 * w1),
        g_single=(6.07e-4 * w1, 6.07e-4 * w1),
        kappa=math.pi * 1e5,
        eta_e=0.3 * w1,
        gamma_e=1e-5 * w1,
        temperature=(0.025, 0.025),
        laser_wavelength=810e-9,
        input_power=1e-3,
    )
    base.update(overrides)
    return SystemParams(**base)
