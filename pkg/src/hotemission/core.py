"""Constants, unit conversion, material/valley/carrier data model and valley geometry.

Everything inside the library is CGS-Gaussian and temperatures are carried in
energy units (erg).  Kelvin, eV and V/cm appear only at the I/O boundary via
the converters below.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import numpy as np

__all__ = [
    "Constants",
    "CGS",
    "kelvin_to_erg",
    "erg_to_kelvin",
    "ev_to_erg",
    "erg_to_ev",
    "volt_per_cm_to_statvolt_per_cm",
    "statvolt_per_cm_to_volt_per_cm",
    "MaterialParams",
    "ValleySet",
    "CarrierState",
    "RadiationQuery",
    "ConfigError",
    "unit_vector",
    "cos2_angle",
    "joule_heating",
    "mobility_from_tau",
    "tau_from_mobility",
    "load_material",
    "material_from_dict",
    "GE_VALLEYS",
]

UNIT_TOL = 1e-9


class ConfigError(ValueError):
    """Invalid configuration; ``key_path`` names the offending entry."""

    def __init__(self, message: str, key_path: str = ""):
        super().__init__(f"{key_path}: {message}" if key_path else message)
        self.key_path = key_path
        self.detail = message

    def to_dict(self) -> dict:
        return {"error": "ConfigError", "key_path": self.key_path, "message": self.detail}


@dataclass(frozen=True)
class Constants:
    """Fundamental constants in CGS-Gaussian units (CODATA 2018)."""

    e0: float = 4.803204712570263e-10  # statC
    hbar: float = 1.054571817e-27  # erg s
    c: float = 2.99792458e10  # cm/s
    kB: float = 1.380649e-16  # erg/K
    m_e: float = 9.1093837015e-28  # g
    eV: float = 1.602176634e-12  # erg

    def __post_init__(self):
        for name in ("e0", "hbar", "c", "kB", "m_e", "eV"):
            if not getattr(self, name) > 0:
                raise ValueError(f"constant {name} must be positive")


CGS = Constants()

# 1 statV = 299.792458 V
_VOLTS_PER_STATVOLT = CGS.c * 1e-8


def kelvin_to_erg(t_kelvin):
    return np.multiply(t_kelvin, CGS.kB)


def erg_to_kelvin(t_erg):
    return np.divide(t_erg, CGS.kB)


def ev_to_erg(e_ev):
    return np.multiply(e_ev, CGS.eV)


def erg_to_ev(e_erg):
    return np.divide(e_erg, CGS.eV)


def volt_per_cm_to_statvolt_per_cm(f):
    return np.divide(f, _VOLTS_PER_STATVOLT)


def statvolt_per_cm_to_volt_per_cm(f):
    return np.multiply(f, _VOLTS_PER_STATVOLT)


def unit_vector(v: Sequence[float]) -> np.ndarray:
    """Normalise ``v`` to unit length."""
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if v.shape != (3,) or n == 0:
        raise ValueError("expected a non-zero 3-vector")
    return v / n


def _require_unit(v, name: str) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector")
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must be a unit vector (|{name}| = {np.linalg.norm(v)!r})")
    return v


@dataclass(frozen=True)
class MaterialParams:
    """Band and lattice parameters of a many-valley semiconductor (CGS, T in erg).

    ``tau_perp0`` / ``tau_par0`` are the acoustic relaxation-time components
    entering 1/tau(e) = (1/tau0) (e/T)^(1/2).  When they are not known they
    can be derived from the deformation potentials with
    :func:`hotemission.acoustic.relaxation_times_acoustic`.
    """

    m_perp: float
    m_par: float
    sigma_d: float
    sigma_u: float
    rho: float
    s_par: float
    s_perp: float
    chi0: float
    T_lattice: float
    tau_perp0: float
    tau_par0: float
    N_D: float = 0.0
    name: str = "custom"

    def __post_init__(self):
        if not self.m_par > self.m_perp > 0:
            raise ValueError("need m_par > m_perp > 0")
        for attr in ("rho", "s_par", "s_perp", "chi0", "T_lattice", "tau_perp0", "tau_par0"):
            if not getattr(self, attr) > 0:
                raise ValueError(f"{attr} must be positive")
        if self.N_D < 0:
            raise ValueError("N_D must be non-negative")

    def with_(self, **changes) -> "MaterialParams":
        return replace(self, **changes)

    @property
    def mobility_perp(self) -> float:
        return mobility_from_tau(self.m_perp, self.tau_perp0)

    @property
    def mobility_par(self) -> float:
        return mobility_from_tau(self.m_par, self.tau_par0)

    @property
    def inv_mtau_perp(self) -> float:
        return 1.0 / (self.m_perp * self.tau_perp0)

    @property
    def inv_mtau_par(self) -> float:
        return 1.0 / (self.m_par * self.tau_par0)


@dataclass(frozen=True)
class ValleySet:
    """Rotation axes of the constant-energy ellipsoids."""

    axes: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if not self.axes:
            raise ValueError("a valley set needs at least one axis")
        for k, ax in enumerate(self.axes):
            _require_unit(ax, f"axes[{k}]")

    def __len__(self) -> int:
        return len(self.axes)

    def vectors(self) -> np.ndarray:
        return np.asarray(self.axes, dtype=float)

    @classmethod
    def from_vectors(cls, vectors) -> "ValleySet":
        return cls(tuple(tuple(float(c) for c in unit_vector(v)) for v in vectors))

    @classmethod
    def germanium(cls) -> "ValleySet":
        """The four <111> valleys of n-Ge (valley 1 along (1,1,1))."""
        return cls.from_vectors([(1, 1, 1), (-1, 1, 1), (1, -1, 1), (-1, -1, 1)])


GE_VALLEYS = ValleySet.germanium()


@dataclass(frozen=True)
class CarrierState:
    """Per-valley concentration (cm^-3) and electron temperature (erg)."""

    n: tuple[float, ...]
    T: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(float(x) for x in self.n))
        object.__setattr__(self, "T", tuple(float(x) for x in self.T))
        if len(self.n) != len(self.T) or not self.n:
            raise ValueError("n and T must be non-empty and of equal length")
        if min(self.n) <= 0 or min(self.T) <= 0:
            raise ValueError("valley concentrations and temperatures must be positive")

    def __len__(self) -> int:
        return len(self.n)

    @property
    def n_total(self) -> float:
        return float(sum(self.n))

    @property
    def mean_temperature(self) -> float:
        """Concentration-weighted electron temperature."""
        return float(np.dot(self.n, self.T) / self.n_total)

    @classmethod
    def uniform(cls, n_valley: float, T_e: float, count: int = 4) -> "CarrierState":
        return cls((n_valley,) * count, (T_e,) * count)

    @classmethod
    def field_111(cls, n1: float, T1: float, n2: float, T2: float) -> "CarrierState":
        """Valley 1 cold (n1, T1); valleys 2-4 share (n2, T2)."""
        return cls((n1, n2, n2, n2), (T1, T2, T2, T2))

    def check_against(self, valleys: ValleySet) -> None:
        if len(self) != len(valleys):
            raise ValueError(f"{len(self)} carrier entries for {len(valleys)} valleys")


@dataclass(frozen=True)
class RadiationQuery:
    """Photon angular frequency and polarisation unit vector."""

    omega: float
    g0: tuple[float, float, float]

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        g = _require_unit(self.g0, "g0")
        object.__setattr__(self, "g0", tuple(float(c) for c in g))

    @property
    def photon_energy(self) -> float:
        return CGS.hbar * self.omega

    def a(self, T_e: float) -> float:
        """Dimensionless photon energy a = hbar*omega / (2 T_e)."""
        return self.photon_energy / (2.0 * T_e)

    def with_polarization(self, g0) -> "RadiationQuery":
        return RadiationQuery(self.omega, tuple(unit_vector(g0)))

    @classmethod
    def from_energy(cls, energy_erg: float, g0) -> "RadiationQuery":
        return cls(energy_erg / CGS.hbar, tuple(unit_vector(g0)))


def cos2_angle(l, g0) -> float:
    """Squared cosine (l . g0)^2 between a valley axis and the polarisation."""
    l = _require_unit(l, "l")
    g0 = _require_unit(g0, "g0")
    return float(np.dot(l, g0) ** 2)


def joule_heating(n_k: float, mu_par: float, mu_perp: float, l_k, F) -> float:
    """Power per unit volume fed by a static field into one valley.

    e0 * n_k * [mu_perp F^2 + (mu_par - mu_perp) (l_k . F)^2] in erg/(s cm^3);
    the field is in statV/cm and the mobilities in cm^2/(statV s).
    """
    if mu_par <= 0 or mu_perp <= 0:
        raise ValueError("mobilities must be positive")
    l_k = _require_unit(l_k, "l_k")
    F = np.asarray(F, dtype=float)
    proj = float(np.dot(l_k, F))
    return CGS.e0 * n_k * (mu_perp * float(F @ F) + (mu_par - mu_perp) * proj * proj)


_MOBILITY_FACTOR = 4.0 / (3.0 * math.sqrt(math.pi))


def mobility_from_tau(m: float, tau0: float) -> float:
    """Acoustic mobility component (4 / 3 sqrt(pi)) e tau0 / m."""
    if m <= 0 or tau0 <= 0:
        raise ValueError("mass and tau0 must be positive")
    return _MOBILITY_FACTOR * CGS.e0 * tau0 / m


def tau_from_mobility(m: float, mu: float) -> float:
    """Inverse of :func:`mobility_from_tau`."""
    if m <= 0 or mu <= 0:
        raise ValueError("mass and mobility must be positive")
    return mu * m / (_MOBILITY_FACTOR * CGS.e0)


# --------------------------------------------------------------------------
# JSON material ingestion

_REQUIRED_MATERIAL_KEYS = (
    "m_perp", "m_par", "sigma_d_eV", "sigma_u_eV", "rho", "s_par", "s_perp", "chi0", "T_lattice_K",
)


def material_from_dict(d: dict[str, Any], key_path: str = "material") -> MaterialParams:
    """Build :class:`MaterialParams` from the JSON schema documented in the README.

    Masses are in free-electron masses, deformation potentials in eV,
    temperatures in K.  Relaxation times are taken from ``tau_perp0_s`` /
    ``tau_par0_s``, from ``mobility_perp_cm2_Vs`` / ``mobility_par_cm2_Vs``,
    or, when both are absent, derived from the deformation potentials.
    """
    from .acoustic import relaxation_times_acoustic

    if not isinstance(d, dict):
        raise ConfigError("expected an object", key_path)
    missing = [k for k in _REQUIRED_MATERIAL_KEYS if k not in d]
    if missing:
        raise ConfigError(f"missing keys {missing}", key_path)
    try:
        base = dict(
            m_perp=float(d["m_perp"]) * CGS.m_e,
            m_par=float(d["m_par"]) * CGS.m_e,
            sigma_d=float(ev_to_erg(d["sigma_d_eV"])),
            sigma_u=float(ev_to_erg(d["sigma_u_eV"])),
            rho=float(d["rho"]),
            s_par=float(d["s_par"]),
            s_perp=float(d["s_perp"]),
            chi0=float(d["chi0"]),
            T_lattice=float(kelvin_to_erg(d["T_lattice_K"])),
            N_D=float(d.get("N_D", 0.0)),
            name=str(d.get("name", "custom")),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad numeric value ({exc})", key_path) from exc

    if "tau_perp0_s" in d and "tau_par0_s" in d:
        tau_perp, tau_par = float(d["tau_perp0_s"]), float(d["tau_par0_s"])
    elif "mobility_perp_cm2_Vs" in d and "mobility_par_cm2_Vs" in d:
        # cm^2/(V s) -> cm^2/(statV s)
        tau_perp = tau_from_mobility(base["m_perp"], float(d["mobility_perp_cm2_Vs"]) * _VOLTS_PER_STATVOLT)
        tau_par = tau_from_mobility(base["m_par"], float(d["mobility_par_cm2_Vs"]) * _VOLTS_PER_STATVOLT)
    else:
        probe = MaterialParams(tau_perp0=1.0, tau_par0=1.0, **base)
        tau_perp, tau_par = relaxation_times_acoustic(probe)
    try:
        return MaterialParams(tau_perp0=tau_perp, tau_par0=tau_par, **base)
    except ValueError as exc:
        raise ConfigError(str(exc), key_path) from exc


def load_material(source: str | Path | dict = "n-Ge", **overrides) -> MaterialParams:
    """Load a bundled preset by name, a JSON file path, or an inline dict.

    ``overrides`` replace raw JSON keys before conversion, e.g.
    ``load_material("n-Ge", T_lattice_K=20, N_D=1e14)``.
    """
    if isinstance(source, dict):
        data = dict(source)
    else:
        path = Path(source)
        if path.suffix == ".json" and path.exists():
            data = json.loads(path.read_text(encoding="utf-8"))
        else:
            try:
                text = resources.files("hotemission.data").joinpath(f"{source}.json").read_text("utf-8")
            except FileNotFoundError as exc:
                raise ConfigError(f"unknown material preset {source!r}", "material") from exc
            data = json.loads(text)
    data.update(overrides)
    return material_from_dict(data)
