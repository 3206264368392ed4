"""
Linearized electro-optomechanical model: optical cavity (a), mechanical
resonator (b) and LC microwave circuit (c).

All rates and frequencies are angular (rad/s). Quadrature ordering is
(X_a, Y_a, X_b, Y_b, X_c, Y_c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.constants import hbar, k as k_B

from .errors import BogoliubovDomainError, ConfigurationError

TWO_PI = 2.0 * math.pi
MODE_NAMES = ("a", "b", "c")


def thermal_occupation(omega: float, T: float) -> float:
    """Bose-Einstein occupation of a bath mode at angular frequency ``omega``."""
    if omega <= 0:
        raise ValueError("omega must be positive")
    if T < 0:
        raise ValueError("temperature must be non-negative")
    if T == 0:
        return 0.0
    x = hbar * omega / (k_B * T)
    # e^-x / (1 - e^-x) does not overflow for large x
    return float(math.exp(-x) / -math.expm1(-x))


@dataclass(frozen=True)
class SystemParams:
    """Physical rates (rad/s) and bath temperature (K)."""

    omega_m: float
    omega_c: float
    omega_a: float
    kappa_a: float
    kappa_c: float
    gamma_m: float
    T: float

    def __post_init__(self):
        for name in ("omega_m", "omega_c", "omega_a", "kappa_a", "kappa_c", "gamma_m"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigurationError(f"{name} must be positive and finite, got {v!r}")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ConfigurationError(f"temperature must be >= 0, got {self.T!r}")

    @classmethod
    def from_frequencies(
        cls,
        f_m: float = 10e6,
        f_c: float = 10e9,
        f_a: float = 200e12,
        kappa_a_over_omega_m: float = 0.08,
        kappa_c_over_omega_m: float = 0.005,
        q_factor: float | None = 5e4,
        gamma_m: float | None = None,
        T: float = 0.015,
    ) -> "SystemParams":
        """Build from ordinary frequencies (Hz) and rates relative to omega_m.

        The mechanical damping is either given directly (rad/s) or derived
        from the quality factor as gamma_m = omega_m / Q.
        """
        omega_m = TWO_PI * f_m
        if gamma_m is None:
            if q_factor is None or q_factor <= 0:
                raise ConfigurationError("either a positive q_factor or gamma_m is required")
            gamma_m = omega_m / q_factor
        return cls(
            omega_m=omega_m,
            omega_c=TWO_PI * f_c,
            omega_a=TWO_PI * f_a,
            kappa_a=kappa_a_over_omega_m * omega_m,
            kappa_c=kappa_c_over_omega_m * omega_m,
            gamma_m=gamma_m,
            T=T,
        )

    @classmethod
    def reference_device(cls, T: float = 0.015) -> "SystemParams":
        """omega_m/2pi = 10 MHz, omega_c/2pi = 10 GHz, omega_a/2pi = 200 THz,
        Q = 5e4, kappa_a = 0.08 omega_m, kappa_c = 0.005 omega_m, T = 15 mK."""
        return cls.from_frequencies(T=T)

    def with_temperature(self, T: float) -> "SystemParams":
        return SystemParams(self.omega_m, self.omega_c, self.omega_a,
                            self.kappa_a, self.kappa_c, self.gamma_m, T)


@dataclass(frozen=True)
class DriveConfig:
    """Effective linearized couplings G-, G+, Gc in rad/s."""

    g_minus: float
    g_plus: float
    g_c: float

    def __post_init__(self):
        for name in ("g_minus", "g_plus", "g_c"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ConfigurationError(f"{name} must be >= 0, got {v!r}")

    @classmethod
    def in_units_of_kappa(cls, params: SystemParams, g_minus: float, g_plus: float,
                          g_c: float) -> "DriveConfig":
        ka = params.kappa_a
        return cls(g_minus * ka, g_plus * ka, g_c * ka)


@dataclass(frozen=True)
class GeometryParams:
    """Device geometry needed to turn drive powers into coupling rates.

    mass (kg), cavity_length (m), gap (m) between electrode and membrane,
    epsilon = C0 / Cs.
    """

    mass: float
    cavity_length: float
    gap: float
    epsilon: float

    def __post_init__(self):
        for name in ("mass", "cavity_length", "gap"):
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"geometry {name} must be positive")
        if not 0 < self.epsilon < 1:
            raise ConfigurationError("geometry epsilon must lie in (0, 1)")

    def single_photon_couplings(self, params: SystemParams) -> tuple[float, float]:
        """(g_a, g_c): optomechanical and electromechanical vacuum couplings."""
        zpf = math.sqrt(hbar / (2.0 * self.mass * params.omega_m))
        g_a = params.omega_a / self.cavity_length * zpf
        g_c = self.epsilon * params.omega_c / (2.0 * self.gap) * zpf
        return g_a, g_c


@dataclass(frozen=True)
class ThermalOccupations:
    n_a: float
    n_b: float
    n_c: float


def thermal_occupations(params: SystemParams) -> ThermalOccupations:
    """Bath occupations; the optical bath is taken to be empty."""
    return ThermalOccupations(
        n_a=0.0,
        n_b=thermal_occupation(params.omega_m, params.T),
        n_c=thermal_occupation(params.omega_c, params.T),
    )


def steady_state_amplitudes(params: SystemParams, E_plus: float, E_minus: float,
                            E_c: float) -> tuple[complex, complex, complex]:
    """Mean intracavity amplitudes (a+, a-, a_c) for given drive rates."""
    wm = params.omega_m
    a_plus = E_plus / complex(params.kappa_a, -wm)
    a_minus = E_minus / complex(params.kappa_a, wm)
    a_c = E_c / complex(params.kappa_c, wm)
    return a_plus, a_minus, a_c


def drive_rates_from_powers(params: SystemParams, P_minus: float, P_plus: float,
                            P_c: float) -> tuple[float, float, float]:
    """(E+, E-, E_c) in rad/s from drive powers in W.

    The optical tones sit at omega_a -/+ omega_m. The microwave tone is at
    omega_o = omega_c - omega_m and uses the same sqrt(2 P kappa / hbar omega) form.
    """
    for p in (P_minus, P_plus, P_c):
        if p < 0:
            raise ConfigurationError("drive powers must be non-negative")
    w_minus = params.omega_a - params.omega_m
    w_plus = params.omega_a + params.omega_m
    w_o = params.omega_c - params.omega_m
    E_plus = math.sqrt(2.0 * P_plus * params.kappa_a / (hbar * w_plus))
    E_minus = math.sqrt(2.0 * P_minus * params.kappa_a / (hbar * w_minus))
    E_c = math.sqrt(2.0 * P_c * params.kappa_c / (hbar * w_o))
    return E_plus, E_minus, E_c


def couplings_from_powers(params: SystemParams, geometry: GeometryParams | None,
                          P_minus: float, P_plus: float, P_c: float) -> DriveConfig:
    """Effective couplings G = g |a| for drive powers given in W."""
    if geometry is None:
        raise ConfigurationError("converting powers to couplings requires geometry")
    E_plus, E_minus, E_c = drive_rates_from_powers(params, P_minus, P_plus, P_c)
    a_plus, a_minus, a_c = steady_state_amplitudes(params, E_plus, E_minus, E_c)
    g_a, g_c = geometry.single_photon_couplings(params)
    return DriveConfig(g_minus=g_a * abs(a_minus), g_plus=g_a * abs(a_plus), g_c=g_c * abs(a_c))


def build_drift(params: SystemParams, drives: DriveConfig) -> NDArray[np.float64]:
    """6x6 drift matrix of the quadrature fluctuations."""
    ka, kc, gm = params.kappa_a, params.kappa_c, params.gamma_m
    d = drives.g_minus - drives.g_plus
    s = drives.g_minus + drives.g_plus
    gc = drives.g_c
    return np.array([
        [-ka, 0.0, 0.0, d, 0.0, 0.0],
        [0.0, -ka, -s, 0.0, 0.0, 0.0],
        [0.0, d, -gm, 0.0, 0.0, gc],
        [-s, 0.0, 0.0, -gm, -gc, 0.0],
        [0.0, 0.0, 0.0, gc, -kc, 0.0],
        [0.0, 0.0, -gc, 0.0, 0.0, -kc],
    ])


def build_diffusion(params: SystemParams, occ: ThermalOccupations) -> NDArray[np.float64]:
    """Diagonal diffusion matrix; the optical entries carry no thermal noise."""
    mech = params.gamma_m * (2.0 * occ.n_b + 1.0)
    micro = params.kappa_c * (2.0 * occ.n_c + 1.0)
    return np.diag([params.kappa_a, params.kappa_a, mech, mech, micro, micro])


@dataclass(frozen=True)
class BogoliubovParams:
    r: float
    cosh_r: float
    sinh_r: float
    g_prime: float


# ratios this close to 1 make r numerically meaningless
_RATIO_LIMIT = 1.0 - 1e-12


def bogoliubov_params(drives: DriveConfig) -> BogoliubovParams:
    """Squeezing parameter tanh r = G+/G- and effective coupling G' = sqrt(G-^2 - G+^2)."""
    gm, gp = drives.g_minus, drives.g_plus
    if gm <= 0 or gp / gm >= _RATIO_LIMIT:
        raise BogoliubovDomainError(
            f"Bogoliubov modes need G- > G+ (got G- = {gm:.6g}, G+ = {gp:.6g})"
        )
    ratio = gp / gm
    g_prime = math.sqrt((gm - gp) * (gm + gp))
    return BogoliubovParams(
        r=math.atanh(ratio),
        cosh_r=gm / g_prime,
        sinh_r=gp / g_prime,
        g_prime=g_prime,
    )


@dataclass(frozen=True)
class EffectiveCouplings:
    """Interaction rates in the Bogoliubov frame."""

    beam_splitter_bc: float
    parametric_bc: float
    cooling_ab: float


def effective_couplings(drives: DriveConfig) -> EffectiveCouplings:
    bog = bogoliubov_params(drives)
    gm, gp, gc = drives.g_minus, drives.g_plus, drives.g_c
    gp2 = bog.g_prime**2
    return EffectiveCouplings(
        beam_splitter_bc=gc * (gm**2 + gp**2) / gp2,
        parametric_bc=2.0 * gc * gm * gp / gp2,
        cooling_ab=bog.g_prime,
    )
