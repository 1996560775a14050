"""Acoustic-phonon channel: absorption, spontaneous emission and its polarisation dependence."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    CGS,
    CarrierState,
    MaterialParams,
    RadiationQuery,
    ValleySet,
    GE_VALLEYS,
    cos2_angle,
    unit_vector,
)
from .specfun import absorption_kernel, emission_kernel

__all__ = [
    "AngularDecomposition",
    "Emission",
    "AcousticEmission",
    "acoustic_w",
    "relaxation_times_acoustic",
    "photon_amplitude",
    "photon_state_density",
    "delta_p_acoustic",
    "absorption_coefficient_acoustic",
    "emission_acoustic",
    "emission_acoustic_valley",
    "emission_acoustic_quantum_limit",
    "emission_symmetric",
    "decompose_111",
    "is_111_pattern",
    "polarization_in_plane",
    "REFERENCE_PLANE_111",
]

# polarisation plane for the (1,1,1) geometry: contains l1 and a vector normal to it
REFERENCE_PLANE_111 = (unit_vector((1, 1, 1)), unit_vector((1, 1, -2)))


@dataclass(frozen=True)
class AngularDecomposition:
    """W(phi) = a0 + a2 cos(2 phi), phi measured from ``reference_axis``."""

    a0: float
    a2: float
    reference_axis: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "a2", float(self.a2))
        object.__setattr__(self, "reference_axis", tuple(float(c) for c in self.reference_axis))
        if abs(self.a2) > self.a0 * (1 + 1e-12):
            raise ValueError("|a2| must not exceed a0 (emission would turn negative)")

    def __call__(self, phi):
        return self.a0 + self.a2 * np.cos(2.0 * np.asarray(phi))

    @property
    def maximum_angle(self) -> float:
        """Angle of maximal emission in [0, pi)."""
        return 0.0 if self.a2 >= 0 else 0.5 * math.pi


@dataclass(frozen=True)
class Emission:
    """Spontaneous emission power per unit volume and solid angle, erg/(s cm^3 sr)."""

    per_valley: tuple[tuple[int, float], ...]
    total: float
    decomposition: AngularDecomposition | None = None

    @property
    def total_over_sphere(self) -> float:
        """Convenience: ``total`` multiplied by 4 pi."""
        return 4.0 * math.pi * self.total


AcousticEmission = Emission


def polarization_in_plane(phi: float, plane=REFERENCE_PLANE_111) -> tuple[float, float, float]:
    """Unit polarisation vector at angle ``phi`` from ``plane[0]`` inside ``plane``."""
    ref, perp = plane
    return tuple(math.cos(phi) * np.asarray(ref) + math.sin(phi) * np.asarray(perp))


def acoustic_w(mat: MaterialParams, qvec, l0) -> float:
    """Scattering weight W_a(q) of all three acoustic branches (deformation potential).

    Depends only on the direction of ``qvec`` relative to the valley axis ``l0``.
    """
    q = np.asarray(qvec, dtype=float)
    qn = np.linalg.norm(q)
    if qn == 0:
        raise ValueError("phonon wave vector must be non-zero")
    c2 = float(np.dot(unit_vector(l0), q) / qn) ** 2
    return _w_from_c2(mat, c2)


def _w_from_c2(mat: MaterialParams, c2):
    pref = mat.T_lattice / (4.0 * math.pi**2 * CGS.hbar**4 * mat.rho)
    longitudinal = (mat.sigma_d + mat.sigma_u * c2) ** 2 / mat.s_par**2
    transverse = mat.sigma_u**2 / mat.s_perp**2 * (1.0 - c2) * c2
    return pref * (longitudinal + transverse)


def relaxation_times_acoustic(mat: MaterialParams, nodes: int = 400) -> tuple[float, float]:
    """(tau_perp0, tau_par0) implied by the deformation potentials of ``mat``.

    In the deformed frame where the valley is spherical, with kappa the
    scaled momentum transfer,
        1/tau_j = 3 sqrt(2) m_perp sqrt(m_par) sqrt(T) * int dOmega W_a(kappa) khat_j^2.
    The angular integral is done by Gauss-Legendre in cos(theta).
    """
    t, w = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (t + 1.0)  # cos(theta) on [0, 1]; integrand is even
    w = 0.5 * w
    mp, ml = mat.m_perp, mat.m_par
    c2 = ml * t * t / (mp * (1.0 - t * t) + ml * t * t)
    wa = _w_from_c2(mat, c2)
    # 2 pi from azimuth, x2 for t in [-1, 0]
    phi_par = 4.0 * math.pi * np.sum(w * wa * t * t)
    phi_perp = 4.0 * math.pi * np.sum(w * wa * 0.5 * (1.0 - t * t))
    pref = 3.0 * math.sqrt(2.0) * mp * math.sqrt(ml) * math.sqrt(mat.T_lattice)
    return 1.0 / (pref * phi_perp), 1.0 / (pref * phi_par)


def _anisotropy_factor(mat: MaterialParams, cos2: float) -> float:
    # 1/(m_perp tau_perp) sin^2 + 1/(m_par tau_par) cos^2
    return mat.inv_mtau_perp * (1.0 - cos2) + mat.inv_mtau_par * cos2


def photon_amplitude(omega: float, volume: float = 1.0, n_photons: float = 1.0) -> float:
    """Vector-potential amplitude holding ``n_photons`` quanta in ``volume``."""
    return 2.0 * CGS.c * math.sqrt(2.0 * math.pi * CGS.hbar * n_photons / (volume * omega))


def photon_state_density(omega: float, volume: float = 1.0) -> float:
    """Photon modes per unit frequency interval and unit solid angle."""
    return volume * omega**2 / (2.0 * math.pi * CGS.c) ** 3


def delta_p_acoustic(
    mat: MaterialParams,
    valley,
    n: float,
    T_e: float,
    q: RadiationQuery,
    A0_amp: float,
    sign: str = "absorption",
) -> float:
    """Energy per unit time and volume exchanged with the wave by one valley.

    ``sign="absorption"`` gives the (positive) single-photon absorption
    term; ``sign="emission"`` the induced emission, -exp(-hbar w/T_e) times it.
    """
    if n <= 0 or T_e <= 0:
        raise ValueError("n and T_e must be positive")
    if sign not in ("absorption", "emission"):
        raise ValueError("sign must be 'absorption' or 'emission'")
    if A0_amp == 0:
        return 0.0
    a = q.a(T_e)
    cos2 = cos2_angle(valley, q.g0)
    pref = 2.0 * CGS.e0**2 / (3.0 * math.sqrt(math.pi))
    p_plus = (
        pref
        * A0_amp**2
        * _anisotropy_factor(mat, cos2)
        * n
        * T_e**1.5
        / (math.sqrt(mat.T_lattice) * CGS.c**2 * q.photon_energy)
        * -absorption_kernel(a)
    )
    if sign == "absorption":
        return p_plus
    return -math.exp(-2.0 * a) * p_plus


def absorption_coefficient_acoustic(
    mat: MaterialParams,
    valleys: ValleySet,
    carriers: CarrierState,
    q: RadiationQuery,
) -> float:
    """Free-carrier absorption coefficient (cm^-1): net absorbed power over incident flux."""
    carriers.check_against(valleys)
    amp = 1.0  # cancels against the flux
    flux = math.sqrt(mat.chi0) / (8.0 * math.pi) * q.omega**2 / CGS.c * amp**2
    net = 0.0
    for axis, n, T in zip(valleys.axes, carriers.n, carriers.T):
        p_plus = delta_p_acoustic(mat, axis, n, T, q, amp, "absorption")
        p_minus = delta_p_acoustic(mat, axis, n, T, q, amp, "emission")
        net += p_plus + p_minus
    return net / flux


def emission_acoustic_valley(
    mat: MaterialParams, valley, n: float, T_e: float, q: RadiationQuery, classical: bool = False
) -> float:
    """Spontaneous emission of one valley, erg/(s cm^3 sr).

    Obtained from the induced-emission term by filling the mode with one
    photon and multiplying by the photon state density.  ``classical=True``
    replaces the exact kernel by its a -> 0 limit.
    """
    amp = photon_amplitude(q.omega)
    induced = -delta_p_acoustic(mat, valley, n, T_e, q, amp, "emission")
    w = induced * photon_state_density(q.omega)
    if classical:
        w *= 2.0 / emission_kernel(q.a(T_e))
    return w


def emission_acoustic_quantum_limit(mat: MaterialParams, valley, n: float, T_e: float, q: RadiationQuery) -> float:
    """a >> 1 limit of :func:`emission_acoustic_valley`.

    e0^2 (hbar w)^(3/2) n exp(-hbar w / T_e) / (6 pi^2 c^3 T^(1/2)) times the
    valley angle factor.  The exact value exceeds it by about 15/(8 a).
    """
    if n <= 0 or T_e <= 0:
        raise ValueError("n and T_e must be positive")
    hw = q.photon_energy
    cos2 = cos2_angle(valley, q.g0)
    return (
        CGS.e0**2 * hw**1.5 * n * math.exp(-hw / T_e)
        / (6.0 * math.pi**2 * CGS.c**3 * math.sqrt(mat.T_lattice))
        * _anisotropy_factor(mat, cos2)
    )


def emission_acoustic(
    mat: MaterialParams,
    valleys: ValleySet,
    carriers: CarrierState,
    q: RadiationQuery,
    classical: bool = False,
) -> Emission:
    """Spontaneous emission summed over valleys.

    For the Ge valley set with a (1,1,1) carrier pattern the result also
    carries the a0 + a2 cos(2 phi1) decomposition.
    """
    carriers.check_against(valleys)
    per = tuple(
        (k, emission_acoustic_valley(mat, ax, n, T, q, classical))
        for k, (ax, n, T) in enumerate(zip(valleys.axes, carriers.n, carriers.T))
    )
    deco = decompose_111(mat, carriers, q, classical) if is_111_pattern(valleys, carriers) else None
    return Emission(per, float(sum(w for _, w in per)), deco)


def _valley_strength(mat: MaterialParams, n: float, T: float, omega: float, classical: bool) -> float:
    # n T^(3/2) E(a) times the common prefactor; angle factor excluded
    kern = 2.0 if classical else emission_kernel(CGS.hbar * omega / (2.0 * T))
    return 2.0 * CGS.e0**2 / (3.0 * math.pi**2.5 * CGS.c**3 * math.sqrt(mat.T_lattice)) * n * T**1.5 * kern


def emission_symmetric(
    mat: MaterialParams, n_e: float, T_e: float, omega: float, classical: bool = False
) -> float:
    """Emission of four <111> valleys with identical (n_e, T_e); polarisation independent."""
    return _valley_strength(mat, n_e, T_e, omega, classical) * (4.0 / 3.0) * (
        2.0 * mat.inv_mtau_perp + mat.inv_mtau_par
    )


def decompose_111(
    mat: MaterialParams, carriers: CarrierState, q: RadiationQuery, classical: bool = False
) -> AngularDecomposition:
    """Split the (1,1,1)-field emission into a0 + a2 cos(2 phi1).

    ``carriers`` must follow :meth:`CarrierState.field_111`.  phi1 is the
    angle between the polarisation and the cold valley axis (1,1,1)/sqrt(3).
    """
    n1, T1, n2, T2 = _unpack_111(carriers)
    s1 = _valley_strength(mat, n1, T1, q.omega, classical)
    s2 = _valley_strength(mat, n2, T2, q.omega, classical)
    diff = s1 - s2
    a0 = emission_symmetric(mat, n2, T2, q.omega, classical) + 0.5 * diff * (
        mat.inv_mtau_perp + mat.inv_mtau_par
    )
    a2 = 0.5 * diff * (mat.inv_mtau_par - mat.inv_mtau_perp)
    return AngularDecomposition(a0, a2, tuple(GE_VALLEYS.axes[0]))


def is_111_pattern(valleys: ValleySet, carriers: CarrierState) -> bool:
    """True for the Ge valley set with valleys 2-4 sharing (n, T)."""
    if len(valleys) != 4 or len(carriers) != 4 or not np.allclose(valleys.vectors(), GE_VALLEYS.vectors()):
        return False
    n, T = carriers.n, carriers.T
    return n[1] == n[2] == n[3] and T[1] == T[2] == T[3]


def _unpack_111(carriers: CarrierState) -> tuple[float, float, float, float]:
    if len(carriers) != 4:
        raise ValueError("the (1,1,1) configuration needs four valleys")
    n, T = carriers.n, carriers.T
    if not (n[1] == n[2] == n[3] and T[1] == T[2] == T[3]):
        raise ValueError("valleys 2-4 must share (n2, T2) for a (1,1,1) field")
    return n[0], T[0], n[1], T[1]
