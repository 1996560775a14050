"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from hotemission.acoustic import (
    decompose_111,
    delta_p_acoustic,
    emission_acoustic,
    emission_acoustic_quantum_limit,
    emission_acoustic_valley,
    polarization_in_plane,
)
from hotemission.core import CGS, GE_VALLEYS, CarrierState, RadiationQuery, unit_vector
from hotemission.coulomb import (
    coulomb_p,
    decompose_111_coulomb,
    emission_coulomb,
    emission_coulomb_classical,
    screening_for,
)
from hotemission.hotfield import (
    MonoValleyModel,
    delta_p_distorted,
    emission_distorted,
    isotropic_substitution_check,
)
from hotemission.oracle import oracle_acoustic, oracle_coulomb, oracle_hotfield
from hotemission.specfun import absorption_kernel, bessel_k1, emission_kernel
from hotemission.sweepio import run_sweep

from conftest import kelvin, omega_for, rel

ROOT = Path(__file__).resolve().parents[1]
SPECIMEN = ROOT / "configs" / "specimen_111.json"
N_SPECIMEN = 2.5e15


def _random_unit(rng):
    v = rng.normal(size=3)
    return tuple(v / np.linalg.norm(v))


def test_criterion_01_detailed_balance(ge, acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(20261019)
    worst = 0.0
    for _ in range(20):
        ax = GE_VALLEYS.axes[rng.integers(4)]
        T = kelvin(rng.uniform(5.0, 300.0))
        alpha = 10 ** rng.uniform(-3, 1.3)
        q = RadiationQuery(alpha * T / CGS.hbar, _random_unit(rng))
        up = delta_p_acoustic(ge, ax, 1e15, T, q, 1.0, "absorption")
        down = delta_p_acoustic(ge, ax, 1e15, T, q, 1.0, "emission")
        worst = max(worst, rel(down / up, -math.exp(-alpha)))
        scr = screening_for(ge, CarrierState.uniform(2.5e14, T))
        up = coulomb_p(ge, ax, 1e15, T, q, scr, "absorption")
        down = coulomb_p(ge, ax, 1e15, T, q, scr, "emission")
        worst = max(worst, rel(down / up, -math.exp(-alpha)))
    dt = time.perf_counter() - t0
    assert acceptance(1, "detailed balance", worst < 1e-12, f"worst relative error {worst:.2e} (tol 1e-12)", dt, 1.0)


def test_criterion_02_asymptotics(ge, acceptance):
    t0 = time.perf_counter()
    T = kelvin(30.0)
    worst_cl = worst_qm = 0.0
    for ax in GE_VALLEYS.axes:
        for g0 in ((1, 0, 0), (0, 1, 1), (1, 1, 1)):
            g0 = tuple(unit_vector(g0))
            q = RadiationQuery(omega_for(1e-3, T), g0)
            exact = emission_acoustic_valley(ge, ax, 1e15, T, q)
            worst_cl = max(worst_cl, rel(exact, emission_acoustic_valley(ge, ax, 1e15, T, q, classical=True)))
            q = RadiationQuery(omega_for(12.0, T), g0)
            exact = emission_acoustic_valley(ge, ax, 1e15, T, q)
            worst_qm = max(worst_qm, rel(exact, emission_acoustic_quantum_limit(ge, ax, 1e15, T, q)))
    dt = time.perf_counter() - t0
    ok = worst_cl < 5e-3 and worst_qm < 2e-2
    detail = f"classical gap {worst_cl:.2e} (tol 5e-3), quantum gap {worst_qm:.3f} at a=12 (tol 0.02)"
    assert acceptance(2, "asymptotics", ok, detail, dt, 1.0)


def test_criterion_03_symmetric_isotropy(ge, acceptance):
    t0 = time.perf_counter()
    T = kelvin(40.0)
    c = CarrierState.uniform(3e14, T)
    w = [
        emission_acoustic(ge, GE_VALLEYS, c, RadiationQuery(omega_for(0.7, T), polarization_in_plane(phi))).total
        for phi in np.linspace(0.0, math.pi, 36, endpoint=False)
    ]
    spread = max(w) / min(w) - 1.0
    dt = time.perf_counter() - t0
    assert acceptance(3, "symmetric-field isotropy", spread < 1e-12, f"spread {spread:.2e} over 36 angles", dt, 1.0)


def test_criterion_04_sign_contrast(ge, acceptance):
    t0 = time.perf_counter()
    T1 = kelvin(30.0)
    n = N_SPECIMEN / 4
    c = CarrierState.field_111(n, T1, n, 2 * T1)
    q = RadiationQuery(omega_for(1e-3, T1), (1, 0, 0))
    scr = screening_for(ge, c)
    a2_ac = decompose_111(ge, c, q).a2
    a2_co = decompose_111_coulomb(ge, c, q, scr).a2
    flipped = CarrierState.field_111(4 * n, 2 * T1, n, T1)
    a2_flip = decompose_111(ge, flipped, q).a2
    dt = time.perf_counter() - t0
    ok = a2_ac > 0 and a2_co < 0 and a2_flip < 0
    detail = f"acoustic A2 {a2_ac:+.3e}, coulomb A2 {a2_co:+.3e}, flipped acoustic A2 {a2_flip:+.3e}"
    assert acceptance(4, "sign contrast", ok, detail, dt, 1.0)


def test_criterion_05_acoustic_oracle(ge, acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    g0 = tuple(unit_vector((1, 2, 0)))
    for a in (0.3, 1.0, 3.0):
        for s in (0.5, 1.0, 2.0):
            T = s * ge.T_lattice
            r = oracle_acoustic(ge, GE_VALLEYS.axes[1], 1e15, T, omega_for(a, T), g0)
            worst = max(worst, r.relative_discrepancy)
    dt = time.perf_counter() - t0
    assert acceptance(5, "acoustic oracle", worst < 5e-3, f"worst discrepancy {worst:.2e} on 3x3 grid (tol 5e-3)", dt, 60.0)


def test_criterion_06_coulomb_oracle(ge, acceptance):
    t0 = time.perf_counter()
    worst = 0.0
    points = [
        (30.0, 0.3, (1, 0, 0), 0),
        (50.0, 1.0, (1, 1, 0), 1),
        (100.0, 3.0, (0, 1, 1), 3),
    ]
    for t, alpha, g0, k in points:
        T = kelvin(t)
        scr = screening_for(ge, CarrierState.uniform(N_SPECIMEN / 4, T))
        r = oracle_coulomb(ge, GE_VALLEYS.axes[k], 1e15, T, alpha * T / CGS.hbar, tuple(unit_vector(g0)), scr)
        worst = max(worst, r.relative_discrepancy)
    T = kelvin(30.0)
    c = CarrierState.uniform(N_SPECIMEN / 4, T)
    scr = screening_for(ge, c)
    q = RadiationQuery(0.02 * T / CGS.hbar, (1, 0, 0))
    ratio = emission_coulomb(ge, GE_VALLEYS, c, q, scr).total / emission_coulomb_classical(ge, GE_VALLEYS, c, q, scr).total
    dt = time.perf_counter() - t0
    ok = worst < 1e-2 and abs(ratio - 1) < 5e-2
    detail = f"oracle worst {worst:.2e} (tol 1e-2), quadrature/classical at hw/T=0.02 {ratio:.3f} (tol 5%)"
    assert acceptance(6, "coulomb oracle", ok, detail, dt, 120.0)


def _model_with_beta(ge, beta, theta0, T):
    base = MonoValleyModel.from_substitution(ge, 0.0, theta0, 1e15, T)
    F = math.sqrt(6 * beta * base.m * T**2 / base.T_lattice) / (CGS.e0 * base.tau0)
    return base.with_(F=F)


def test_criterion_07_hotfield(ge, acceptance):
    t0 = time.perf_counter()
    T = kelvin(30.0)
    model = _model_with_beta(ge, 0.1, 0.0, T)
    w1 = omega_for(1.0, T)
    r = oracle_hotfield(model, w1)
    printed_gap = rel(delta_p_distorted(model, w1, 1.0, "printed"), r.brute_force)
    magic = math.acos(1 / math.sqrt(3))
    at_magic = model.with_(theta0=magic)
    mg_cf = rel(emission_distorted(at_magic, w1), emission_distorted(at_magic.with_(F=0.0), w1))
    r_magic = oracle_hotfield(at_magic, w1)
    r_free = oracle_hotfield(at_magic.with_(F=0.0), w1)
    mg_bf = abs(r_magic.brute_force - r_free.brute_force)
    mg_err = r_magic.error_estimate + r_free.error_estimate
    w0 = omega_for(1e-3, T)
    brace = emission_distorted(model, w0) / emission_distorted(model.with_(F=0.0), w0)
    target = 1 + model.beta * model.p2
    dt = time.perf_counter() - t0
    ok = r.relative_discrepancy < 1e-2 and mg_cf < 1e-12 and mg_bf <= mg_err and rel(brace, target) < 1e-2
    detail = (
        f"closed form vs oracle {r.relative_discrepancy:.2e} (printed coefficients {printed_gap:.3f}); "
        f"magic angle gap {mg_cf:.1e}, oracle {mg_bf / abs(r_free.brute_force):.1e} vs error {mg_err / abs(r_free.brute_force):.1e}; "
        f"classical brace {brace:.4f} vs 1+beta*P2 = {target:.4f}"
    )
    assert acceptance(7, "hotfield consistency", ok, detail, dt, 30.0)


def test_criterion_08_isotropic_substitution(ge, acceptance):
    t0 = time.perf_counter()
    T = kelvin(30.0)
    worst = 0.0
    for a in (0.5, 5.0):
        for m in (None, ge.m_perp, ge.m_par):
            model = MonoValleyModel.from_substitution(ge, 0.0, 0.3, 1e15, T, m)
            worst = max(worst, isotropic_substitution_check(ge, model, omega_for(a, T)))
    dt = time.perf_counter() - t0
    assert acceptance(8, "isotropic substitution", worst < 1e-12, f"worst discrepancy {worst:.2e}", dt, 1.0)


def test_criterion_09_special_functions(bessel_reference, acceptance):
    t0 = time.perf_counter()
    k1 = max(rel(bessel_k1(p["x"]), float(p["k1"])) for p in bessel_reference)
    ident = max(
        rel(abs(absorption_kernel(a)) * math.exp(-2 * a), emission_kernel(a)) for a in np.logspace(-6, math.log10(300), 100)
    )
    dt = time.perf_counter() - t0
    ok = len(bessel_reference) == 100 and k1 < 1e-10 and ident < 1e-12
    detail = f"K1 worst {k1:.2e} over {len(bessel_reference)} points, kernel identity worst {ident:.2e}"
    assert acceptance(9, "special functions", ok, detail, dt, 1.0)


def test_criterion_10_cli(tmp_path, acceptance):
    t0 = time.perf_counter()
    outs = []
    for k in range(2):
        out = tmp_path / f"run{k}.csv"
        proc = subprocess.run(
            [sys.executable, "-m", "hotemission.cli", "--config", str(SPECIMEN), "--out", str(out)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        outs.append(out.read_bytes())
    identical = outs[0] == outs[1]
    rows = run_sweep(SPECIMEN)
    peaks = {}
    for name in ("specimen-acoustic", "specimen-coulomb"):
        for point in sorted({r["point"] for r in rows if r["sweep"] == name}):
            sel = [r for r in rows if r["sweep"] == name and r["point"] == point]
            best = max(sel, key=lambda r: r["W_erg_s_cm3_sr"])
            peaks.setdefault(name, set()).add(round(best["phi_rad"], 9))
    swap = peaks["specimen-acoustic"] == {0.0} and peaks["specimen-coulomb"] == {round(math.pi / 2, 9)}
    dt = time.perf_counter() - t0
    detail = f"byte-identical {identical}, peak phi acoustic {sorted(peaks['specimen-acoustic'])} coulomb {sorted(peaks['specimen-coulomb'])}"
    assert acceptance(10, "CLI determinism", identical and swap, detail, dt, 10.0)
