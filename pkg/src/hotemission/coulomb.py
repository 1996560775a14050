"""Ionized-impurity (screened Coulomb) channel.

The general single-photon power is a one-dimensional integral over the
reduced initial energy x = e/T_e; in the classical limit it collapses to
relaxation times carrying a Coulomb logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .acoustic import (
    AngularDecomposition,
    Emission,
    _unpack_111,
    is_111_pattern,
    photon_amplitude,
    photon_state_density,
)
from .core import (
    CGS,
    CarrierState,
    GE_VALLEYS,
    MaterialParams,
    RadiationQuery,
    ValleySet,
    cos2_angle,
)
from .quadrature import QuadResult, gauss_kronrod
from .specfun import EULER_GAMMA

__all__ = [
    "ScreeningParams",
    "debye_radius",
    "screening_for",
    "b1_b2",
    "psi_kernel",
    "coulomb_x_integral",
    "coulomb_p",
    "coulomb_logarithm",
    "relaxation_times_coulomb",
    "absorption_coefficient_coulomb",
    "emission_coulomb",
    "emission_coulomb_classical",
    "decompose_111_coulomb",
    "CLASSICAL_LIMIT",
    "DEFAULT_BRACE",
]

CLASSICAL_LIMIT = 0.2  # hbar*omega / T above which the classical formulas are refused
DEFAULT_BRACE = "sum"  # validated against the direct momentum-space integral


@dataclass(frozen=True)
class ScreeningParams:
    """Debye screening length and the cutoff convention of the Coulomb logarithm.

    ``xmin_power=2`` uses x_min = hbar^2 / (8 m_perp T r_D^2), the
    dimensionless form; ``xmin_power=1`` reproduces the dimensionally
    inconsistent single power of r_D and exists only for comparison.
    """

    r_D: float
    xmin_power: int = 2

    def __post_init__(self):
        if not self.r_D > 0:
            raise ValueError("r_D must be positive")
        if self.xmin_power not in (1, 2):
            raise ValueError("xmin_power must be 1 or 2")

    def x_min(self, m_perp: float, T_e: float) -> float:
        return CGS.hbar**2 / (8.0 * m_perp * T_e * self.r_D**self.xmin_power)


def debye_radius(n_total: float, T_e: float, chi0: float) -> float:
    """r_D = sqrt(chi0 T_e / (4 pi e0^2 n))."""
    if n_total <= 0 or T_e <= 0 or chi0 <= 0:
        raise ValueError("inputs must be positive")
    return math.sqrt(chi0 * T_e / (4.0 * math.pi * CGS.e0**2 * n_total))


def screening_for(mat: MaterialParams, carriers: CarrierState, xmin_power: int = 2) -> ScreeningParams:
    """Screening by the whole electron gas at its concentration-weighted temperature."""
    return ScreeningParams(debye_radius(carriers.n_total, carriers.mean_temperature, mat.chi0), xmin_power)


def _b1_b2_series(y):
    # expansions in y = 1/b, used for b > 4 where the closed forms cancel
    y2 = y * y
    b1 = np.zeros_like(y)
    b2 = np.zeros_like(y)
    p = y2 * y2  # y^4
    for k in range(1, 20):
        b1 += (-1) ** (k + 1) * 4.0 * k / (4.0 * k * k - 1.0) * p
        p = p * y2
    p = y2 * y2
    for k in range(2, 21):
        b2 += (-1) ** k * (2.0 * k - 2.0) / (2.0 * k - 1.0) * p
        p = p * y2
    return b1, b2


def b1_b2(b):
    """Angular integrals B1(b), B2(b) of the screened Coulomb kernel."""
    b = np.asarray(b, dtype=float)
    if np.any(b <= 0):
        raise ValueError("b must be positive")
    scalar = b.ndim == 0
    b = np.atleast_1d(b)
    b1 = np.empty_like(b)
    b2 = np.empty_like(b)
    big = b > 4.0
    if np.any(big):
        b1[big], b2[big] = _b1_b2_series(1.0 / b[big])
    sm = ~big
    if np.any(sm):
        bs = b[sm]
        at = np.arctan(1.0 / bs)
        b1[sm] = 1.0 / bs**2 + (1.0 - bs**2) / bs**3 * at
        b2[sm] = -1.0 / (1.0 + bs**2) + at / bs
    if scalar:
        return float(b1[0]), float(b2[0])
    return b1, b2


def psi_kernel(mat: MaterialParams, qr, cos2: float):
    """Psi at dimensionless momentum transfer q*r_D for a valley with (l.g0)^2 = cos2."""
    qr = np.asarray(qr, dtype=float)
    b0sq = mat.m_perp / (mat.m_par - mat.m_perp)
    with np.errstate(divide="ignore"):
        b = np.sqrt(b0sq * (1.0 + 1.0 / (qr * qr)))
    b = np.where(np.isfinite(b), b, 1e154)
    b1, b2 = b1_b2(b)
    return b1 + cos2 * (-b1 + 2.0 * mat.m_perp / mat.m_par * b2)


def coulomb_x_integral(
    mat: MaterialParams,
    cos2: float,
    T_e: float,
    alpha: float,
    r_D: float,
    brace_mode: str = DEFAULT_BRACE,
    rel_tol: float = 1e-6,
) -> QuadResult:
    """int_0^inf dx e^-x {Psi(q+) +/- Psi(q-)} / sqrt(x (x + alpha)).

    [0, 1] is mapped by x = t^2 to remove the 1/sqrt(x) endpoint; [1, inf)
    by x = 1 - ln(u) onto (0, 1].
    """
    if brace_mode not in ("sum", "difference"):
        raise ValueError("brace_mode must be 'sum' or 'difference'")
    sgn = 1.0 if brace_mode == "sum" else -1.0
    scale = math.sqrt(2.0 * mat.m_perp * T_e) / CGS.hbar * r_D

    def brace(x):
        sx, sxa = np.sqrt(x), np.sqrt(x + alpha)
        qp = scale * (sxa + sx)
        # alpha / (sxa + sx) avoids cancellation in sxa - sx
        qm = scale * alpha / (sxa + sx)
        return psi_kernel(mat, qp, cos2) + sgn * psi_kernel(mat, qm, cos2)

    def inner(t):
        x = t * t
        return 2.0 * np.exp(-x) * brace(x) / np.sqrt(x + alpha)

    def tail(u):
        x = 1.0 - np.log(u)
        return math.exp(-1.0) * brace(x) / np.sqrt(x * (x + alpha))

    # extra breakpoints near the screening and photon scales
    bp = sorted({min(0.5, math.sqrt(alpha)), min(0.5, 1.0 / scale)} - {0.0})
    r1 = gauss_kronrod(inner, 0.0, 1.0, rel_tol=rel_tol * 0.5, breakpoints=bp)
    r2 = gauss_kronrod(tail, 0.0, 1.0, rel_tol=rel_tol * 0.5)
    return QuadResult(r1.value + r2.value, r1.error + r2.error, r1.evaluations + r2.evaluations, r1.intervals + r2.intervals)


def coulomb_p(
    mat: MaterialParams,
    valley,
    n: float,
    T_e: float,
    q: RadiationQuery,
    screening: ScreeningParams,
    sign: str = "absorption",
    A0_amp: float = 1.0,
    brace_mode: str = DEFAULT_BRACE,
    rel_tol: float = 1e-6,
    return_error: bool = False,
):
    """Single-photon power exchanged via impurity scattering by one valley.

    Absorption is positive; emission is -exp(-hbar w / T_e) times it.
    Requires ``mat.N_D > 0``.  Raises :class:`~hotemission.quadrature.QuadratureError`
    with diagnostics if the x-integral fails to converge.
    """
    if sign not in ("absorption", "emission"):
        raise ValueError("sign must be 'absorption' or 'emission'")
    if n <= 0 or T_e <= 0:
        raise ValueError("n and T_e must be positive")
    hw = q.photon_energy
    alpha = hw / T_e
    cos2 = cos2_angle(valley, q.g0)
    res = coulomb_x_integral(mat, cos2, T_e, alpha, screening.r_D, brace_mode, rel_tol)
    pref = (
        CGS.e0**6 * mat.N_D * n / (4.0 * mat.chi0**2 * CGS.c**2 * hw)
        * math.sqrt(2.0 * math.pi * mat.m_par / T_e)
        * A0_amp**2 / (mat.m_par - mat.m_perp) ** 2
    )
    factor = 1.0 if sign == "absorption" else -math.exp(-alpha)
    value = factor * pref * res.value
    if return_error:
        return value, abs(factor * pref) * res.error
    return value


def coulomb_logarithm(mat: MaterialParams, T_e: float, screening: ScreeningParams) -> float:
    """ln(1 / (C1 x_min)) with ln C1 = Euler's constant."""
    x_min = screening.x_min(mat.m_perp, T_e)
    return -math.log(x_min) - EULER_GAMMA


def relaxation_times_coulomb(
    mat: MaterialParams, T_e: float, screening: ScreeningParams
) -> tuple[float, float]:
    """(tau_perp, tau_par) for impurity scattering at electron temperature ``T_e``."""
    if not mat.N_D > 0:
        raise ValueError("impurity scattering needs N_D > 0")
    L = coulomb_logarithm(mat, T_e, screening)
    if not L > 0:
        raise ValueError(
            f"Coulomb logarithm is non-positive (x_min={screening.x_min(mat.m_perp, T_e):.3g}); "
            "screening too strong for the logarithmic approximation"
        )
    b0sq = mat.m_perp / (mat.m_par - mat.m_perp)
    b0 = math.sqrt(b0sq)
    at = math.atan(1.0 / b0)
    common = 8.0 / 3.0 * CGS.e0**4 * math.sqrt(2.0 * mat.m_par) / (mat.chi0**2 * T_e**1.5) * mat.N_D * L
    inv_perp = common / mat.m_perp * 0.5 * b0 * (b0 + (1.0 - b0sq) * at)
    inv_par = common / mat.m_par * b0 * (-b0 + (1.0 + b0sq) * at)
    return 1.0 / inv_perp, 1.0 / inv_par


def _require_classical(q: RadiationQuery, carriers: CarrierState) -> None:
    worst = q.photon_energy / min(carriers.T)
    if worst >= CLASSICAL_LIMIT:
        raise ValueError(
            f"hbar*omega/T_e = {worst:.3g} is outside the classical regime (< {CLASSICAL_LIMIT}); "
            "use coulomb_p / emission_coulomb for the general case"
        )


def _classical_rates(mat, T, screening):
    tau_perp, tau_par = relaxation_times_coulomb(mat, T, screening)
    return 1.0 / (mat.m_perp * tau_perp), 1.0 / (mat.m_par * tau_par)


def absorption_coefficient_coulomb(
    mat: MaterialParams,
    valleys: ValleySet,
    carriers: CarrierState,
    q: RadiationQuery,
    screening: ScreeningParams,
) -> float:
    """Classical free-carrier absorption coefficient (cm^-1) for impurity scattering."""
    carriers.check_against(valleys)
    _require_classical(q, carriers)
    total = 0.0
    for ax, n, T in zip(valleys.axes, carriers.n, carriers.T):
        c2 = cos2_angle(ax, q.g0)
        rp, rl = _classical_rates(mat, T, screening)
        total += n * ((1.0 - c2) * rp + c2 * rl)
    return 1.5 * math.pi**1.5 * CGS.e0**2 / math.sqrt(mat.chi0) / (CGS.c * q.omega**2) * total


_CLASSICAL_PREF = 3.0 * CGS.e0**2 / (16.0 * math.pi**1.5 * CGS.c**3)


def emission_coulomb_classical(
    mat: MaterialParams,
    valleys: ValleySet,
    carriers: CarrierState,
    q: RadiationQuery,
    screening: ScreeningParams,
) -> Emission:
    """Classical spontaneous emission for impurity scattering, erg/(s cm^3 sr).

    For the Ge valley set with a (1,1,1) carrier pattern the result carries
    the a0 + a2 cos(2 phi1) decomposition.
    """
    carriers.check_against(valleys)
    _require_classical(q, carriers)
    per = []
    for k, (ax, n, T) in enumerate(zip(valleys.axes, carriers.n, carriers.T)):
        c2 = cos2_angle(ax, q.g0)
        rp, rl = _classical_rates(mat, T, screening)
        per.append((k, _CLASSICAL_PREF * n * T * ((1.0 - c2) * rp + c2 * rl)))
    deco = decompose_111_coulomb(mat, carriers, q, screening) if is_111_pattern(valleys, carriers) else None
    return Emission(tuple(per), float(sum(w for _, w in per)), deco)


def _valley_coefficients(mat, n, T, q, screening, classical, brace_mode):
    # emission of one valley written as alpha + beta cos^2(phi)
    if classical:
        rp, rl = _classical_rates(mat, T, screening)
        s = _CLASSICAL_PREF * n * T
        return s * rp, s * (rl - rp)
    l = (0.0, 0.0, 1.0)
    w_perp = _emission_valley(mat, l, n, T, RadiationQuery(q.omega, (1.0, 0.0, 0.0)), screening, brace_mode)
    w_par = _emission_valley(mat, l, n, T, RadiationQuery(q.omega, (0.0, 0.0, 1.0)), screening, brace_mode)
    return w_perp, w_par - w_perp


def decompose_111_coulomb(
    mat: MaterialParams,
    carriers: CarrierState,
    q: RadiationQuery,
    screening: ScreeningParams,
    classical: bool = True,
    brace_mode: str = DEFAULT_BRACE,
) -> AngularDecomposition:
    """a0 + a2 cos(2 phi1) for impurity scattering with the field along (1,1,1)."""
    n1, T1, n2, T2 = _unpack_111(carriers)
    if classical:
        _require_classical(q, carriers)
    al1, be1 = _valley_coefficients(mat, n1, T1, q, screening, classical, brace_mode)
    al2, be2 = _valley_coefficients(mat, n2, T2, q, screening, classical, brace_mode)
    # four valleys at (n2, T2): sum cos^2 = 4/3
    sym = 4.0 * al2 + 4.0 / 3.0 * be2
    d_al, d_be = al1 - al2, be1 - be2
    a0 = sym + d_al + 0.5 * d_be
    a2 = 0.5 * d_be
    return AngularDecomposition(a0, a2, tuple(GE_VALLEYS.axes[0]))


def _emission_valley(mat, valley, n, T, q, screening, brace_mode=DEFAULT_BRACE):
    amp = photon_amplitude(q.omega)
    induced = -coulomb_p(mat, valley, n, T, q, screening, "emission", amp, brace_mode)
    return induced * photon_state_density(q.omega)


def emission_coulomb(
    mat: MaterialParams,
    valleys: ValleySet,
    carriers: CarrierState,
    q: RadiationQuery,
    screening: ScreeningParams,
    brace_mode: str = DEFAULT_BRACE,
) -> Emission:
    """Spontaneous emission for impurity scattering at any hbar*omega/T_e (quadrature route)."""
    carriers.check_against(valleys)
    per = tuple(
        (k, _emission_valley(mat, ax, n, T, q, screening, brace_mode))
        for k, (ax, n, T) in enumerate(zip(valleys.axes, carriers.n, carriers.T))
    )
    deco = (
        decompose_111_coulomb(mat, carriers, q, screening, classical=False, brace_mode=brace_mode)
        if is_111_pattern(valleys, carriers)
        else None
    )
    return Emission(per, float(sum(w for _, w in per)), deco)
