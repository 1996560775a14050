"""Brute-force evaluators of the underlying collision integrals.

Each oracle integrates the single-photon energy-exchange integral directly,
with the field-dressed matrix element and scattering weight evaluated in the
physical (lab-frame) variables.  The closed forms in :mod:`acoustic`,
:mod:`coulomb` and :mod:`hotfield` are compared against these numbers; the
oracles never call the closed-form kernels.

Deterministic tensor-product rules are used throughout.  The reported error
is the change between the run at the requested resolution and a run at
roughly twice the node count.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import roots_genlaguerre

from .core import CGS, MaterialParams, RadiationQuery, unit_vector

__all__ = [
    "OracleReport",
    "OracleConvergenceError",
    "valley_frame",
    "gamma_factor",
    "acoustic_exchange_integral",
    "oracle_acoustic",
    "coulomb_exchange_integral",
    "oracle_coulomb",
    "monte_carlo_coulomb",
    "hotfield_exchange_integral",
    "oracle_hotfield",
]


class OracleConvergenceError(RuntimeError):
    """Raised when a brute-force integral does not settle within its node budget."""


@dataclass(frozen=True)
class OracleReport:
    closed_form: float
    brute_force: float
    error_estimate: float
    samples_or_nodes: int
    label: str = ""

    def __post_init__(self):
        if not self.error_estimate > 0:
            object.__setattr__(self, "error_estimate", max(abs(self.brute_force) * 1e-16, 1e-300))

    @property
    def relative_discrepancy(self) -> float:
        den = max(abs(self.closed_form), abs(self.brute_force))
        return abs(self.closed_form - self.brute_force) / den if den else 0.0

    @property
    def relative_error(self) -> float:
        return self.error_estimate / abs(self.brute_force) if self.brute_force else math.inf

    def to_dict(self) -> dict:
        d = asdict(self)
        d["relative_discrepancy"] = self.relative_discrepancy
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def valley_frame(l) -> np.ndarray:
    """Orthonormal rows (e1, e2, l) with ``l`` the valley axis."""
    l = unit_vector(l)
    trial = np.array([1.0, 0.0, 0.0]) if abs(l[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = unit_vector(trial - np.dot(trial, l) * l)
    e2 = np.cross(l, e1)
    return np.vstack([e1, e2, l])


def gamma_factor(A, q, l, m_perp: float, m_par: float, convention: str = "physical"):
    """Field-dressing factor gamma for momentum transfer ``q`` (last axis = components).

    ``physical``: A.q + (m_perp/m_par - 1)(A.l)(q.l), i.e. m_perp * sum_j A_j q_j / m_j,
    the phase an electron with anisotropic mass acquires in the wave.
    ``printed``: the same with the mass ratio inverted.
    """
    if convention == "physical":
        ratio = m_perp / m_par
    elif convention == "printed":
        ratio = m_par / m_perp
    else:
        raise ValueError("convention must be 'physical' or 'printed'")
    A = np.asarray(A, dtype=float)
    l = np.asarray(l, dtype=float)
    return q @ A + (ratio - 1.0) * float(A @ l) * (q @ l)


def _sphere_rule(n_theta: int, n_phi: int):
    t, wt = np.polynomial.legendre.leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    wphi = np.full(n_phi, 2.0 * math.pi / n_phi)
    return t, wt, phi, wphi


def _pairwise_sum(x: np.ndarray) -> float:
    # fixed-order reduction so results do not depend on chunking
    return float(np.sum(np.sort(np.ravel(x))[::-1]))


# ---------------------------------------------------------------------------
# acoustic phonons


def _exchange_integral_5d(
    masses: tuple[float, float],
    l,
    T_e: float,
    omega: float,
    weight_fn,
    sign: int,
    n_r: int,
    n_t: int,
    n_tp: int,
    n_pp: int,
) -> float:
    """Integral over initial and final momenta of  f(p) * weight(p, p') * delta(e' - e -/+ hbar w).

    Deformed coordinates p = M^(1/2) k make the Maxwellian isotropic; the
    delta function removes the radius of the larger of (k, k').  The smaller
    radius r uses generalised Gauss-Laguerre nodes in s = r^2 / 2T.  The
    azimuth of the first direction is replaced by a rigid rotation psi about
    the valley axis (4-point trapezoid, exact for the quadratic dependence on
    the polarisation), leaving theta, theta', phi' as tensor Gauss rules.
    Returns the integral without the n / ((2 pi T)^{3/2} m_perp sqrt(m_par))
    normalisation of f and without the Jacobians of dp dp'.
    """
    frame = valley_frame(l)
    hw = CGS.hbar * omega
    s, ws = roots_genlaguerre(n_r, 0.5)
    r = np.sqrt(2.0 * T_e * s)
    R = np.sqrt(r * r + 2.0 * hw)
    # r^2 dr = (2T)^{3/2} / 2 * s^{1/2} ds
    w_r = ws * (2.0 * T_e) ** 1.5 / 2.0
    if sign < 0:
        w_r = w_r * math.exp(-hw / T_e)

    t, wt = np.polynomial.legendre.leggauss(n_t)
    tp, wtp = np.polynomial.legendre.leggauss(n_tp)
    php = 2.0 * math.pi * np.arange(n_pp) / n_pp
    wpp = 2.0 * math.pi / n_pp
    psi = 2.0 * math.pi * np.arange(4) / 4
    wpsi = 2.0 * math.pi / 4

    st = np.sqrt(1.0 - t * t)
    stp = np.sqrt(1.0 - tp * tp)
    # unit vectors in the valley frame, shape (..., 3)
    u1 = np.stack([st, np.zeros_like(t), t], axis=-1)  # (n_t, 3), azimuth 0
    u2 = np.stack(
        [stp[:, None] * np.cos(php)[None, :], stp[:, None] * np.sin(php)[None, :], np.broadcast_to(tp[:, None], (n_tp, n_pp))],
        axis=-1,
    )  # (n_tp, n_pp, 3)
    sqm = np.sqrt(np.array([masses[0], masses[0], masses[1]]))

    total = np.zeros(n_r)
    for ir in range(n_r):
        k_small, k_big = r[ir], R[ir]
        k_init, k_fin = (k_small, k_big) if sign > 0 else (k_big, k_small)
        acc = 0.0
        for ps in psi:
            c, sn = math.cos(ps), math.sin(ps)
            rot = np.array([[c, -sn, 0.0], [sn, c, 0.0], [0.0, 0.0, 1.0]])
            v1 = u1 @ rot.T  # initial direction
            v2 = u2 @ rot.T  # final direction
            k_i = k_init * v1[:, None, None, :]
            k_f = k_fin * v2[None, :, :, :]
            # physical momenta in the lab frame
            p_i = (k_i * sqm) @ frame
            p_f = (k_f * sqm) @ frame
            val = weight_fn(p_i, p_f)
            acc += wpsi * np.einsum("i,j,ijk->", wt, wtp, val) * wpp
        total[ir] = acc * k_big
    return float(np.dot(w_r, total))


def acoustic_exchange_integral(
    mat: MaterialParams,
    valley,
    n: float,
    T_e: float,
    omega: float,
    g0,
    sign: int,
    A0_amp: float = 1.0,
    resolution: int = 1,
    gamma_convention: str = "physical",
) -> tuple[float, int]:
    """Brute-force single-photon exchange power with acoustic phonons for one valley.

    Returns (power, node count); positive for absorption (``sign=+1``),
    negative for emission (``sign=-1``).
    """
    l = unit_vector(valley)
    A = A0_amp * unit_vector(g0)
    hbar = CGS.hbar
    pref_w = mat.T_lattice / (4.0 * math.pi**2 * hbar**4 * mat.rho)

    def weight(p_i, p_f):
        qv = (p_f - p_i) / hbar
        qn2 = np.einsum("...k,...k->...", qv, qv)
        c2 = (qv @ l) ** 2 / qn2
        wa = pref_w * (
            (mat.sigma_d + mat.sigma_u * c2) ** 2 / mat.s_par**2
            + mat.sigma_u**2 / mat.s_perp**2 * (1.0 - c2) * c2
        )
        gam = gamma_factor(A, qv, l, mat.m_perp, mat.m_par, gamma_convention)
        return wa * (CGS.e0 * gam / (2.0 * mat.m_perp * omega * CGS.c)) ** 2

    n_r, n_t, n_tp, n_pp = 16 * resolution, 24 * resolution, 40 * resolution, 32 * resolution
    integral = _exchange_integral_5d((mat.m_perp, mat.m_par), l, T_e, omega, weight, sign, n_r, n_t, n_tp, n_pp)
    jac = (mat.m_perp * math.sqrt(mat.m_par)) ** 2
    norm = n / ((2.0 * math.pi * T_e) ** 1.5 * mat.m_perp * math.sqrt(mat.m_par))
    power = sign * hbar * omega * jac * norm * integral
    return power, n_r * n_t * n_tp * n_pp * 4


def oracle_acoustic(
    mat: MaterialParams,
    valley,
    n: float,
    T_e: float,
    omega: float,
    g0,
    l: int = 1,
    resolution: int = 1,
    gamma_convention: str = "physical",
) -> OracleReport:
    """Compare :func:`~hotemission.acoustic.delta_p_acoustic` with the brute-force integral.

    The error estimate is the change between ``resolution`` and ``resolution + 1``.
    """
    from .acoustic import delta_p_acoustic

    if l not in (1, -1):
        raise ValueError("only single-quantum terms (l = +1 or -1) are supported")
    q = RadiationQuery(omega, tuple(unit_vector(g0)))
    cf = delta_p_acoustic(mat, valley, n, T_e, q, 1.0, "absorption" if l > 0 else "emission")
    bf, nodes = acoustic_exchange_integral(mat, valley, n, T_e, omega, g0, l, 1.0, resolution, gamma_convention)
    bf_hi, nodes_hi = acoustic_exchange_integral(mat, valley, n, T_e, omega, g0, l, 1.0, resolution + 1, gamma_convention)
    return OracleReport(cf, bf_hi, abs(bf_hi - bf), nodes + nodes_hi, "acoustic")


# ---------------------------------------------------------------------------
# ionized impurities


def _kappa_range(hw: float, T_e: float, s: int, cutoff: float = 60.0) -> tuple[float, float]:
    # y = kappa^2/2 where (s hw - y)^2 / (4 T y) < cutoff
    bq = 2.0 * s * hw + 4.0 * cutoff * T_e
    disc = math.sqrt(bq * bq - 4.0 * hw * hw)
    y_hi = 0.5 * (bq + disc)
    y_lo = hw * hw / y_hi
    return math.sqrt(2.0 * y_lo), math.sqrt(2.0 * y_hi)


def coulomb_exchange_integral(
    mat: MaterialParams,
    valley,
    n: float,
    T_e: float,
    omega: float,
    g0,
    r_D: float,
    sign: int,
    A0_amp: float = 1.0,
    resolution: int = 1,
) -> tuple[float, int]:
    """Direct momentum-space evaluation of the screened-impurity exchange power.

    In the deformed frame (p = M^(1/2) k) the scattering vector kappa = k' - k
    fixes, through the energy delta, the component of k along kappa; the
    Maxwellian in the two transverse components integrates to 2 pi T.  The
    remaining three-dimensional integral over kappa is done on a log-radial
    composite Gauss-Legendre rule times a Gauss-Legendre polar rule and a
    trapezoidal azimuth, with the matrix element evaluated in lab-frame
    physical momenta.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 (absorption) or -1 (emission)")
    hbar = CGS.hbar
    hw = hbar * omega
    l = unit_vector(valley)
    frame = valley_frame(l)
    A = A0_amp * unit_vector(g0)

    k_lo, k_hi = _kappa_range(hw, T_e, sign)
    n_panel, n_gl = 48 * resolution, 8
    xg, wg = np.polynomial.legendre.leggauss(n_gl)
    edges = np.linspace(math.log(k_lo), math.log(k_hi), n_panel + 1)
    half = 0.5 * np.diff(edges)
    u = (0.5 * (edges[:-1] + edges[1:])[:, None] + half[:, None] * xg[None, :]).ravel()
    wu = (half[:, None] * wg[None, :]).ravel()
    rho = np.exp(u)

    t, wt = np.polynomial.legendre.leggauss(64 * resolution)
    n_phi = 8 * resolution
    phi = 2.0 * math.pi * (np.arange(n_phi) + 0.5) / n_phi
    st = np.sqrt(1.0 - t * t)
    dirs = np.stack(
        [st[:, None] * np.cos(phi)[None, :], st[:, None] * np.sin(phi)[None, :], np.broadcast_to(t[:, None], (t.size, n_phi))],
        axis=-1,
    )  # valley frame
    sqm = np.sqrt(np.array([mat.m_perp, mat.m_perp, mat.m_par]))
    dp_unit = (dirs * sqm) @ frame  # lab-frame physical transfer per unit kappa
    dp2_unit = np.einsum("...k,...k->...", dp_unit, dp_unit)
    gam_unit = gamma_factor(A, dp_unit / hbar, l, mat.m_perp, mat.m_par, "physical")
    ang_w = wt[:, None] * (2.0 * math.pi / n_phi)

    screen2 = (hbar / r_D) ** 2
    radial = np.empty_like(rho)
    for i, r in enumerate(rho):
        g2 = (CGS.e0 * r * gam_unit / (2.0 * mat.m_perp * omega * CGS.c)) ** 2
        den = (r * r * dp2_unit + screen2) ** 2
        radial[i] = np.sum(ang_w * g2 / den)
    k_par = (sign * hw - 0.5 * rho * rho) / rho
    # d^3 kappa = rho^3 du dOmega; transverse Maxwellian 2 pi T; 1/kappa from the delta
    radial = radial * rho**2 * 2.0 * math.pi * T_e * np.exp(-k_par * k_par / (2.0 * T_e))
    integral = float(np.dot(wu, radial))

    jac = (mat.m_perp * math.sqrt(mat.m_par)) ** 2
    norm = n / ((2.0 * math.pi * T_e) ** 1.5 * mat.m_perp * math.sqrt(mat.m_par))
    coupling = 4.0 * CGS.e0**4 * mat.N_D / mat.chi0**2
    power = sign * hw * coupling * jac * norm * integral
    return power, rho.size * t.size * n_phi


def oracle_coulomb(
    mat: MaterialParams,
    valley,
    n: float,
    T_e: float,
    omega: float,
    g0,
    screening,
    brace_mode: str = "sum",
    l: int = 1,
    resolution: int = 1,
) -> OracleReport:
    """Compare the one-dimensional x-integral route with the direct momentum integral."""
    from .coulomb import coulomb_p

    if l not in (1, -1):
        raise ValueError("only single-quantum terms (l = +1 or -1) are supported")
    q = RadiationQuery(omega, tuple(unit_vector(g0)))
    cf = coulomb_p(mat, valley, n, T_e, q, screening, "absorption" if l > 0 else "emission", 1.0, brace_mode)
    bf, nodes = coulomb_exchange_integral(mat, valley, n, T_e, omega, g0, screening.r_D, l, 1.0, resolution)
    bf_hi, nodes_hi = coulomb_exchange_integral(mat, valley, n, T_e, omega, g0, screening.r_D, l, 1.0, resolution + 1)
    err = abs(bf_hi - bf)
    if err > 0.05 * abs(bf_hi):
        raise OracleConvergenceError(f"Coulomb oracle unsettled: {bf:.6g} vs {bf_hi:.6g}")
    return OracleReport(cf, bf_hi, err, nodes + nodes_hi, f"coulomb/{brace_mode}")


def monte_carlo_coulomb(
    mat: MaterialParams,
    valley,
    T_e: float,
    omega: float,
    g0,
    screening,
    brace_mode: str = "sum",
    m: int = 14,
    seeds=(0, 1, 2, 3, 4, 5, 6, 7),
) -> OracleReport:
    """Quasi-Monte Carlo estimate of the x-integral behind the impurity power.

    x is drawn from the Gamma(1/2) law, which absorbs e^-x / sqrt(x) and
    leaves the bounded integrand sqrt(pi) {Psi+ +/- Psi-} / sqrt(x + alpha).
    Scrambled Sobol points with the listed seeds give independent replicas;
    the error is the standard error over replicas.  Only the integration
    method is independent here: the Psi kernel itself is shared.
    """
    from scipy.special import gammaincinv
    from scipy.stats import qmc

    from .coulomb import coulomb_x_integral, psi_kernel

    alpha = CGS.hbar * omega / T_e
    cos2 = float(np.dot(unit_vector(valley), unit_vector(g0)) ** 2)
    sgn = 1.0 if brace_mode == "sum" else -1.0
    scale = math.sqrt(2.0 * mat.m_perp * T_e) / CGS.hbar * screening.r_D
    estimates = []
    for seed in seeds:
        pts = qmc.Sobol(d=1, scramble=True, seed=seed).random_base2(m)[:, 0]
        x = gammaincinv(0.5, pts)
        sx, sxa = np.sqrt(x), np.sqrt(x + alpha)
        val = psi_kernel(mat, scale * (sxa + sx), cos2) + sgn * psi_kernel(mat, scale * alpha / (sxa + sx), cos2)
        estimates.append(math.sqrt(math.pi) * float(np.mean(val / sxa)))
    est = np.asarray(estimates)
    mc = float(est.mean())
    err = float(est.std(ddof=1) / math.sqrt(est.size))
    cf = coulomb_x_integral(mat, cos2, T_e, alpha, screening.r_D, brace_mode).value
    return OracleReport(cf, mc, err, est.size * 2**m, f"coulomb-qmc/{brace_mode}")


# ---------------------------------------------------------------------------
# field-distorted distribution (mono-valley)


def _f2_over_f0_numeric(model, p):
    # (2/3)(e0 F)^2 tau p d/dp(tau/p df0/dp) / f0 by nested central differences
    m, T, TL, tau0 = model.m, model.T_e, model.T_lattice, model.tau0

    def f0(x):
        return np.exp(-x * x / (2.0 * m * T))

    def tau(x):
        return tau0 * np.sqrt(2.0 * m * TL) / x

    def inner(x):
        h = 1e-4 * x
        return tau(x) / x * (f0(x + h) - f0(x - h)) / (2.0 * h)

    h = 1e-3 * p
    d_inner = (inner(p + h) - inner(p - h)) / (2.0 * h)
    return 2.0 / 3.0 * (CGS.e0 * model.F) ** 2 * tau(p) * p * d_inner / f0(p)


def _f1_over_f0(model, p):
    tau = model.tau0 * np.sqrt(2.0 * model.m * model.T_lattice) / p
    return CGS.e0 * model.F * tau * p / (model.m * model.T_e)


def hotfield_exchange_integral(
    model,
    omega: float,
    A0_amp: float = 1.0,
    resolution: int = 1,
    parts: tuple[str, ...] = ("f0", "f1", "f2"),
) -> tuple[float, int]:
    """Brute-force induced-emission power of the mono-valley gas with f0 + f1 P1 + f2 P2.

    The field lies along z and the polarisation in the xz plane at
    ``model.theta0``.  ``parts`` selects which Legendre components of the
    distribution enter, so the odd f1 contribution can be inspected on its
    own.  f2 is obtained by finite differences of its defining expression.
    """
    known = {"f0", "f1", "f2"}
    if not parts or set(parts) - known:
        raise ValueError(f"parts must be a non-empty subset of {sorted(known)}")
    hbar = CGS.hbar
    fhat = np.array([0.0, 0.0, 1.0])
    g0 = np.array([math.sin(model.theta0), 0.0, math.cos(model.theta0)])
    A = A0_amp * g0
    w_a = 1.0 / (4.0 * math.pi * model.m * math.sqrt(2.0 * model.m * model.T_lattice) * model.tau0)

    def weight(p_i, p_f):
        qv = (p_f - p_i) / hbar
        pn = np.sqrt(np.einsum("...k,...k->...", p_i, p_i))
        c = (p_i @ fhat) / pn
        shape = np.zeros_like(c)
        if "f0" in parts:
            shape = shape + 1.0
        if "f1" in parts:
            shape = shape + _f1_over_f0(model, pn) * c
        if "f2" in parts:
            shape = shape + _f2_over_f0_numeric(model, pn) * 0.5 * (3.0 * c * c - 1.0)
        return w_a * (CGS.e0 * (qv @ A) / (2.0 * model.m * omega * CGS.c)) ** 2 * shape

    n_r, n_t, n_tp, n_pp = 16 * resolution, 24 * resolution, 24 * resolution, 16 * resolution
    integral = _exchange_integral_5d((model.m, model.m), fhat, model.T_e, omega, weight, -1, n_r, n_t, n_tp, n_pp)
    jac = model.m**3
    norm = model.n / ((2.0 * math.pi * model.T_e) ** 1.5 * model.m**1.5)
    return -hbar * omega * jac * norm * integral, n_r * n_t * n_tp * n_pp * 4


def oracle_hotfield(model, omega: float, coefficients: str = "derived", resolution: int = 1) -> OracleReport:
    """Compare :func:`~hotemission.hotfield.delta_p_distorted` with the brute-force integral."""
    from .hotfield import delta_p_distorted

    cf = delta_p_distorted(model, omega, 1.0, coefficients)
    bf, nodes = hotfield_exchange_integral(model, omega, 1.0, resolution)
    bf_hi, nodes_hi = hotfield_exchange_integral(model, omega, 1.0, resolution + 1)
    return OracleReport(cf, bf_hi, abs(bf_hi - bf), nodes + nodes_hi, f"hotfield/{coefficients}")
