import math

import numpy as np
import pytest

from conftest import kelvin, rel
from hotemission.acoustic import REFERENCE_PLANE_111, polarization_in_plane
from hotemission.core import CGS, GE_VALLEYS, CarrierState, RadiationQuery
from hotemission.coulomb import (
    ScreeningParams,
    absorption_coefficient_coulomb,
    b1_b2,
    coulomb_logarithm,
    coulomb_p,
    coulomb_x_integral,
    debye_radius,
    decompose_111_coulomb,
    emission_coulomb,
    emission_coulomb_classical,
    relaxation_times_coulomb,
    screening_for,
)

T30 = kelvin(30.0)


def test_b1_b2_at_one():
    b1, b2 = b1_b2(1.0)
    assert b1 == 1.0
    assert b2 == pytest.approx(math.pi / 4 - 0.5, rel=1e-15)


@pytest.mark.parametrize("b", [10.0, 100.0, 1e4])
def test_b1_b2_large_b(b):
    b1, b2 = b1_b2(b)
    assert b1 == pytest.approx(4 / (3 * b**4), rel=3 / b**2)
    assert b2 == pytest.approx(2 / (3 * b**4), rel=3 / b**2)


def test_series_joins_closed_form_smoothly():
    lo, hi = b1_b2(np.array([4.0 * (1 - 1e-12), 4.0 * (1 + 1e-12)]))
    assert lo[0] == pytest.approx(lo[1], rel=1e-10)
    assert hi[0] == pytest.approx(hi[1], rel=1e-10)


def test_b_nonpositive_rejected():
    with pytest.raises(ValueError):
        b1_b2(0.0)


def test_debye_radius_and_screening():
    r = debye_radius(1e15, T30, 16.0)
    assert r == pytest.approx(math.sqrt(16.0 * T30 / (4 * math.pi * CGS.e0**2 * 1e15)))
    s2 = ScreeningParams(r)
    s1 = ScreeningParams(r, xmin_power=1)
    assert s2.x_min(1.0, 1.0) / s1.x_min(1.0, 1.0) == pytest.approx(1 / r)
    with pytest.raises(ValueError):
        ScreeningParams(-1.0)
    with pytest.raises(ValueError):
        ScreeningParams(1.0, xmin_power=3)


@pytest.fixture(scope="module")
def scr(ge):
    return screening_for(ge, CarrierState.uniform(6.25e14, T30))


def test_coulomb_p_positive_and_detailed_balance(ge, scr):
    q = RadiationQuery(0.3 * T30 / CGS.hbar, (0.6, 0.0, 0.8))
    l = GE_VALLEYS.axes[2]
    plus = coulomb_p(ge, l, 1e15, T30, q, scr, "absorption")
    minus = coulomb_p(ge, l, 1e15, T30, q, scr, "emission")
    assert plus > 0
    assert minus / plus == pytest.approx(-math.exp(-0.3), rel=1e-14)


def test_quadrature_error_estimate_is_honest(ge, scr):
    alpha = 0.5
    coarse = coulomb_x_integral(ge, 0.3, T30, alpha, scr.r_D, rel_tol=1e-6)
    fine = coulomb_x_integral(ge, 0.3, T30, alpha, scr.r_D, rel_tol=5e-7)
    assert abs(coarse.value - fine.value) <= coarse.error


def test_brace_mode_validated(ge, scr):
    with pytest.raises(ValueError):
        coulomb_x_integral(ge, 0.3, T30, 0.1, scr.r_D, brace_mode="product")


def test_relaxation_time_scaling(ge, scr):
    tp1, tl1 = relaxation_times_coulomb(ge, T30, scr)
    tp2, tl2 = relaxation_times_coulomb(ge, 2 * T30, scr)
    log_ratio = coulomb_logarithm(ge, T30, scr) / coulomb_logarithm(ge, 2 * T30, scr)
    assert tp2 / tp1 == pytest.approx(2**1.5 * log_ratio, rel=1e-13)
    assert tl2 / tl1 == pytest.approx(2**1.5 * log_ratio, rel=1e-13)
    assert ge.m_perp * tp1 < ge.m_par * tl1


def test_relaxation_brackets_positive():
    for b0 in np.linspace(1e-3, 3.0, 200):
        at = math.atan(1 / b0)
        assert b0 + (1 - b0**2) * at > 0
        assert -b0 + (1 + b0**2) * at > 0


def test_relaxation_rejects_nonpositive_log(ge):
    tight = ScreeningParams(1e-8)
    with pytest.raises(ValueError, match="Coulomb logarithm"):
        relaxation_times_coulomb(ge, T30, tight)
    with pytest.raises(ValueError, match="N_D"):
        relaxation_times_coulomb(ge.with_(N_D=0.0), T30, ScreeningParams(1e-4))


def test_absorption_coefficient_properties(ge, scr):
    c = CarrierState.uniform(6.25e14, T30)
    w = 0.02 * T30 / CGS.hbar
    k1 = absorption_coefficient_coulomb(ge, GE_VALLEYS, c, RadiationQuery(w, (1, 0, 0)), scr)
    k2 = absorption_coefficient_coulomb(ge, GE_VALLEYS, c, RadiationQuery(2 * w, (1, 0, 0)), scr)
    k3 = absorption_coefficient_coulomb(ge, GE_VALLEYS, c, RadiationQuery(w, (0.0, 0.6, 0.8)), scr)
    k4 = absorption_coefficient_coulomb(ge.with_(N_D=2 * ge.N_D), GE_VALLEYS, c, RadiationQuery(w, (1, 0, 0)), scr)
    assert k1 > 0
    assert k2 == pytest.approx(k1 / 4, rel=1e-14)
    assert k3 == pytest.approx(k1, rel=1e-12)
    assert k4 == pytest.approx(2 * k1, rel=1e-14)


def test_quantum_input_rejected(ge, scr):
    c = CarrierState.uniform(6.25e14, T30)
    q = RadiationQuery(T30 / CGS.hbar, (1, 0, 0))
    with pytest.raises(ValueError, match="coulomb_p"):
        absorption_coefficient_coulomb(ge, GE_VALLEYS, c, q, scr)
    with pytest.raises(ValueError):
        emission_coulomb_classical(ge, GE_VALLEYS, c, q, scr)


def test_a2_negative_for_hot_side_valleys(ge):
    c = CarrierState.field_111(6.25e14, T30, 6.25e14, 2 * T30)
    scr = screening_for(ge, c)
    q = RadiationQuery(0.02 * T30 / CGS.hbar, REFERENCE_PLANE_111[0])
    assert decompose_111_coulomb(ge, c, q, scr).a2 < 0
    assert decompose_111_coulomb(ge, c, q, scr, classical=False).a2 < 0


def test_a2_vanishes_when_valley_weights_match(ge):
    scr = ScreeningParams(1e-5)
    T1, T2, n2 = T30, 2 * T30, 1e14

    def weight(T):
        return T / relaxation_times_coulomb(ge, T, scr)[0]

    n1 = n2 * weight(T2) / weight(T1)
    q = RadiationQuery(0.02 * T30 / CGS.hbar, REFERENCE_PLANE_111[0])
    d = decompose_111_coulomb(ge, CarrierState.field_111(n1, T1, n2, T2), q, scr)
    assert abs(d.a2) < 1e-12 * d.a0


@pytest.mark.parametrize("classical", [True, False])
def test_decomposition_matches_direct_sum(ge, classical):
    c = CarrierState.field_111(6.25e14, T30, 6.25e14, 2 * T30)
    scr = screening_for(ge, c)
    omega = 0.05 * T30 / CGS.hbar
    d = decompose_111_coulomb(ge, c, RadiationQuery(omega, REFERENCE_PLANE_111[0]), scr, classical=classical)
    fn = emission_coulomb_classical if classical else emission_coulomb
    for phi in np.linspace(0, math.pi, 8, endpoint=False):
        q = RadiationQuery(omega, polarization_in_plane(phi))
        tol = 1e-12 if classical else 1e-9
        assert rel(d(phi), fn(ge, GE_VALLEYS, c, q, scr).total) < tol


def test_classical_emission_falls_with_temperature(ge):
    scr = ScreeningParams(debye_radius(2.5e15, T30, ge.chi0))
    temps = [kelvin(t) for t in (30, 40, 60, 90)]
    w = []
    for T in temps:
        q = RadiationQuery(0.01 * temps[0] / CGS.hbar, (1, 0, 0))
        assert coulomb_logarithm(ge, T, scr) > 2
        w.append(emission_coulomb_classical(ge, GE_VALLEYS, CarrierState.uniform(1e14, T), q, scr).total)
    assert all(np.diff(w) < 0)


def test_quadrature_route_approaches_leading_log(ge):
    # the exact integral carries an O(1/L) constant beyond the leading logarithm
    T = kelvin(100.0)
    c = CarrierState.uniform(1e14, T)
    q = RadiationQuery(1e-9 * T / CGS.hbar, (1, 0, 0))
    gaps = []
    for r_D in (1e-4, 1e-2, 1.0):
        scr = ScreeningParams(r_D)
        exact = emission_coulomb(ge, GE_VALLEYS, c, q, scr).total
        leading = emission_coulomb_classical(ge, GE_VALLEYS, c, q, scr).total
        gaps.append((1 - exact / leading) * coulomb_logarithm(ge, T, scr))
    assert gaps[0] == pytest.approx(gaps[-1], rel=0.05)
    assert 0.3 < gaps[-1] < 1.0
