"""Field-distorted distribution in a mono-valley model.

Parabolic band e = p^2/2m, isotropic acoustic scattering with
1/tau(e) = (1/tau0) (e/T)^(1/2), and a distribution
f0 + f1 P1(cos theta) + f2 P2(cos theta) about the field direction.  The
odd f1 part drops out of the exchange power; f2 makes the emission depend
on the angle theta0 between polarisation and field.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .acoustic import emission_symmetric, photon_amplitude, photon_state_density
from .core import CGS, MaterialParams
from .specfun import bessel_k1_scaled, emission_kernel, legendre_p2

__all__ = [
    "MonoValleyModel",
    "maxwellian",
    "f1_correction",
    "f2_correction",
    "angular_coefficients",
    "delta_p_distorted",
    "emission_distorted",
    "emission_distorted_classical",
    "isotropic_substitution_check",
    "COEFFICIENTS",
]

COEFFICIENTS = ("derived", "printed")


@dataclass(frozen=True)
class MonoValleyModel:
    """Isotropic-mass electron gas heated by a static field.

    ``F`` in statV/cm, temperatures in erg, ``theta0`` is the angle between
    polarisation and field.
    """

    m: float
    tau0: float
    F: float
    theta0: float
    n: float
    T_e: float
    T_lattice: float

    def __post_init__(self):
        for name in ("m", "tau0", "n", "T_e", "T_lattice"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.F < 0:
            raise ValueError("F is a magnitude and must be non-negative")
        if self.beta >= 1:
            raise ValueError(f"distortion parameter beta={self.beta:.3g} >= 1: diffusion expansion breaks down")

    @property
    def drift_ratio(self) -> float:
        """(e0 F tau0)^2 T / (m T_e^2): squared drift-to-thermal momentum ratio."""
        return (CGS.e0 * self.F * self.tau0) ** 2 * self.T_lattice / (self.m * self.T_e**2)

    @property
    def beta(self) -> float:
        """Classical anisotropy parameter, drift_ratio / 6."""
        return self.drift_ratio / 6.0

    @property
    def p2(self) -> float:
        return float(legendre_p2(math.cos(self.theta0)))

    def with_(self, **changes) -> "MonoValleyModel":
        return replace(self, **changes)

    def tau(self, energy):
        """Energy-dependent relaxation time tau0 (T / e)^(1/2)."""
        return self.tau0 * np.sqrt(self.T_lattice / np.asarray(energy, dtype=float))

    @classmethod
    def from_substitution(
        cls, mat: MaterialParams, F: float, theta0: float, n: float, T_e: float, m: float | None = None
    ) -> "MonoValleyModel":
        """Mono-valley stand-in for four <111> valleys under a (1,0,0) field.

        Uses 1/(m tau0) = (2/(m_perp tau_perp) + 1/(m_par tau_par)) / 3; the
        mass defaults to the conductivity mass 3 / (2/m_perp + 1/m_par).
        """
        if m is None:
            m = 3.0 / (2.0 / mat.m_perp + 1.0 / mat.m_par)
        inv_mtau = (2.0 * mat.inv_mtau_perp + mat.inv_mtau_par) / 3.0
        return cls(m, 1.0 / (m * inv_mtau), F, theta0, n, T_e, mat.T_lattice)


def maxwellian(model: MonoValleyModel, energy):
    """f0(e) = n (2 pi m T_e)^(-3/2) exp(-e / T_e)."""
    e = np.asarray(energy, dtype=float)
    return model.n * (2.0 * math.pi * model.m * model.T_e) ** -1.5 * np.exp(-e / model.T_e)


def f1_correction(model: MonoValleyModel, energy):
    """Odd part -e0 F tau df0/dp = e0 F tau p f0 / (m T_e)."""
    e = np.asarray(energy, dtype=float)
    p = np.sqrt(2.0 * model.m * e)
    return CGS.e0 * model.F * model.tau(e) * p / (model.m * model.T_e) * maxwellian(model, e)


def f2_correction(model: MonoValleyModel, energy):
    """Second Legendre component (2/3)(e0 F)^2 tau p d/dp(tau/p df0/dp).

    With tau proportional to 1/p this is
    (2/3)(e0 F tau0)^2 T/(m T_e) f0 (1/e + 2/T_e).
    """
    e = np.asarray(energy, dtype=float)
    if np.any(e <= 0):
        raise ValueError("energy must be positive")
    amp = 2.0 / 3.0 * (CGS.e0 * model.F * model.tau0) ** 2 * model.T_lattice / (model.m * model.T_e)
    return amp * maxwellian(model, e) * (1.0 / e + 2.0 / model.T_e)


def angular_coefficients(a, coefficients: str = "derived"):
    """(isotropic, anisotropic) kernels so that the emission brace is iso + drift_ratio P2 aniso.

    ``derived``: aniso = (4/15)[E(a) + (1+2a)/2 a e^-a K1(a)].
    ``printed``: aniso = (2/15)[E(a) + (1+4a)/2 a e^-a K1(a)].
    E(a) = a^2 e^-a K2(a) is the isotropic emission kernel.
    """
    if coefficients not in COEFFICIENTS:
        raise ValueError(f"coefficients must be one of {COEFFICIENTS}")
    a = np.asarray(a, dtype=float)
    iso = emission_kernel(a)
    ak1 = a * np.exp(-2.0 * a) * bessel_k1_scaled(a)  # a e^-a K1(a) with the overall e^-a
    if coefficients == "derived":
        aniso = 4.0 / 15.0 * (iso + 0.5 * (1.0 + 2.0 * a) * ak1)
    else:
        aniso = 2.0 / 15.0 * (iso + 0.5 * (1.0 + 4.0 * a) * ak1)
    return iso, aniso


def delta_p_distorted(
    model: MonoValleyModel, omega: float, A0_amp: float = 1.0, coefficients: str = "derived"
) -> float:
    """Induced single-photon emission power (negative), erg/(s cm^3)."""
    if not omega > 0:
        raise ValueError("omega must be positive")
    a = CGS.hbar * omega / (2.0 * model.T_e)
    iso, aniso = angular_coefficients(a, coefficients)
    brace = float(iso + model.drift_ratio * model.p2 * aniso)
    pref = (
        2.0 * CGS.e0**2 / (3.0 * math.sqrt(math.pi))
        * A0_amp**2 * model.n / (model.m * model.tau0)
        * model.T_e**1.5 / (math.sqrt(model.T_lattice) * CGS.c**2 * CGS.hbar * omega)
    )
    return -pref * brace


def emission_distorted(model: MonoValleyModel, omega: float, coefficients: str = "derived") -> float:
    """Spontaneous emission per unit volume and solid angle, erg/(s cm^3 sr)."""
    induced = -delta_p_distorted(model, omega, photon_amplitude(omega), coefficients)
    return induced * photon_state_density(omega)


def emission_distorted_classical(model: MonoValleyModel, omega: float, coefficients: str = "derived") -> float:
    """a -> 0 limit: isotropic classical emission times {1 + k beta P2}.

    k = 2 for the derived coefficients and 1 for the printed ones.
    """
    k = 2.0 if coefficients == "derived" else 1.0
    if coefficients not in COEFFICIENTS:
        raise ValueError(f"coefficients must be one of {COEFFICIENTS}")
    base = 4.0 * CGS.e0**2 * model.n * model.T_e**1.5 / (
        3.0 * math.pi**2.5 * CGS.c**3 * math.sqrt(model.T_lattice) * model.m * model.tau0
    )
    return base * (1.0 + k * model.beta * model.p2)


def isotropic_substitution_check(mat: MaterialParams, model: MonoValleyModel, omega: float) -> float:
    """Relative gap between the field-free mono-valley emission and four equal valleys.

    The valleys carry n/4 each at T_e; the mono-valley model should have been
    built with :meth:`MonoValleyModel.from_substitution` (any mass).
    """
    mono = emission_distorted(model.with_(F=0.0), omega)
    multi = emission_symmetric(mat, model.n / 4.0, model.T_e, omega)
    return abs(mono - multi) / abs(multi)
