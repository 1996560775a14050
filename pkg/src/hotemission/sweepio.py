"""Polarisation sweeps driven by a versioned JSON config, with CSV/JSON output.

Config layout (schema_version 1)::

    {
      "schema_version": 1,
      "material": "n-Ge",                  # preset name, path, or inline object
      "material_overrides": {"N_D": 2.5e15},
      "sweeps": [
        {
          "name": "specimen-acoustic",
          "scenario": "field-111",         # field-111 | field-100 | lattice-temp-scan
          "mechanism": "acoustic",         # acoustic | coulomb | auto-mix
          "mix_weights": {"acoustic": 1.0, "coulomb": 1.0},   # auto-mix only
          "photon_energy_meV": 0.1,
          "angles_deg": [0, 10, ...],      # or "angles" in radians
          "field_values": [
            {"F_V_cm": 20, "n1": 6.25e14, "T1_K": 20, "n2": 6.25e14, "T2_K": 40}
          ]
        }
      ]
    }

field-100 points carry ``n`` (total) and ``T_e_K``; lattice-temp-scan
points are field-111 points with an extra ``T_lattice_K`` and optional
per-point ``mix_weights``.  A single sweep object may also be given
directly at top level.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


from . import acoustic, coulomb, hotfield
from .core import (
    CGS,
    CarrierState,
    ConfigError,
    GE_VALLEYS,
    MaterialParams,
    RadiationQuery,
    ev_to_erg,
    kelvin_to_erg,
    load_material,
    volt_per_cm_to_statvolt_per_cm,
)

__all__ = [
    "SCHEMA_VERSION",
    "SCENARIOS",
    "MECHANISMS",
    "CSV_COLUMNS",
    "SweepPoint",
    "SweepSpec",
    "parse_config",
    "load_config",
    "run_sweep",
    "evaluate_point",
    "emit_csv",
    "emit_json",
    "format_csv",
]

SCHEMA_VERSION = 1
SCENARIOS = ("field-111", "field-100", "lattice-temp-scan")
MECHANISMS = ("acoustic", "coulomb", "auto-mix")
CSV_COLUMNS = (
    "sweep",
    "scenario",
    "mechanism",
    "point",
    "F_V_cm",
    "T_lattice_K",
    "n1_cm3",
    "T1_K",
    "n2_cm3",
    "T2_K",
    "photon_energy_meV",
    "phi_rad",
    "W_erg_s_cm3_sr",
    "A0",
    "A2",
)
ORACLE_COLUMNS = ("oracle_relative_discrepancy", "oracle_relative_error")


@dataclass(frozen=True)
class SweepPoint:
    """One heating condition; temperatures in K, concentrations per valley in cm^-3."""

    F_V_cm: float
    n1: float
    T1_K: float
    n2: float
    T2_K: float
    T_lattice_K: float | None = None
    mix_weights: tuple[float, float] | None = None


@dataclass(frozen=True)
class SweepSpec:
    name: str
    scenario: str
    mechanism: str
    angles: tuple[float, ...]
    points: tuple[SweepPoint, ...]
    photon_energy_meV: float
    mix_weights: tuple[float, float] | None = None
    coulomb_brace: str = coulomb.DEFAULT_BRACE
    coulomb_classical: bool = False
    xmin_power: int = 2
    hotfield_coefficients: str = "derived"
    mono_mass: float | None = None  # in free-electron masses

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}", "scenario")
        if self.mechanism not in MECHANISMS:
            raise ConfigError(f"unknown mechanism {self.mechanism!r}; expected one of {MECHANISMS}", "mechanism")
        if not self.angles:
            raise ConfigError("angles must be non-empty", "angles")
        if any(not (0.0 <= a < 2.0 * math.pi) for a in self.angles):
            raise ConfigError("angles must lie in [0, 2 pi)", "angles")
        if not self.points:
            raise ConfigError("field_values must be non-empty", "field_values")
        if not self.photon_energy_meV > 0:
            raise ConfigError("photon energy must be positive", "photon_energy_meV")
        if self.scenario == "field-100" and self.mechanism != "acoustic":
            raise ConfigError("the field-100 scenario uses the mono-valley acoustic model only", "mechanism")
        if self.mechanism == "auto-mix" and self.mix_weights is None and any(
            p.mix_weights is None for p in self.points
        ):
            raise ConfigError("auto-mix needs explicit mix_weights", "mix_weights")
        if self.coulomb_brace not in ("sum", "difference"):
            raise ConfigError("coulomb_brace must be 'sum' or 'difference'", "coulomb.brace")


def _num(d: dict, key: str, path: str, default=None, positive: bool = True) -> float:
    if key not in d:
        if default is not None:
            return default
        raise ConfigError(f"missing key {key!r}", path)
    try:
        v = float(d[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{key} must be a number", f"{path}.{key}") from exc
    if not math.isfinite(v) or (positive and not v > 0) or v < 0:
        raise ConfigError(f"{key} must be {'positive' if positive else 'non-negative'}", f"{path}.{key}")
    return v


def _weights(d: Any, path: str) -> tuple[float, float]:
    if not isinstance(d, dict) or set(d) - {"acoustic", "coulomb"}:
        raise ConfigError("mix_weights must be an object with keys 'acoustic' and 'coulomb'", path)
    w = (_num(d, "acoustic", path, 0.0, False), _num(d, "coulomb", path, 0.0, False))
    if w == (0.0, 0.0):
        raise ConfigError("at least one mix weight must be non-zero", path)
    return w


def _parse_point(d: Any, scenario: str, path: str) -> SweepPoint:
    if not isinstance(d, dict):
        raise ConfigError("field value entries must be objects", path)
    F = _num(d, "F_V_cm", path, positive=scenario != "field-100")
    if scenario == "field-100":
        n = _num(d, "n", path)
        T = _num(d, "T_e_K", path)
        return SweepPoint(F, n / 4.0, T, n / 4.0, T)
    pt = dict(
        F_V_cm=F,
        n1=_num(d, "n1", path),
        T1_K=_num(d, "T1_K", path),
        n2=_num(d, "n2", path),
        T2_K=_num(d, "T2_K", path),
    )
    if scenario == "lattice-temp-scan":
        pt["T_lattice_K"] = _num(d, "T_lattice_K", path)
    if "mix_weights" in d:
        pt["mix_weights"] = _weights(d["mix_weights"], f"{path}.mix_weights")
    return SweepPoint(**pt)


def _parse_sweep(d: Any, path: str, index: int) -> SweepSpec:
    if not isinstance(d, dict):
        raise ConfigError("sweep must be an object", path)
    scenario = d.get("scenario")
    if scenario not in SCENARIOS:
        raise ConfigError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}", f"{path}.scenario")
    mechanism = d.get("mechanism")
    if mechanism not in MECHANISMS:
        raise ConfigError(f"unknown mechanism {mechanism!r}; expected one of {MECHANISMS}", f"{path}.mechanism")
    if "angles" in d and "angles_deg" in d:
        raise ConfigError("give either angles or angles_deg, not both", path)
    if "angles_deg" in d:
        raw, conv = d["angles_deg"], math.radians
    elif "angles" in d:
        raw, conv = d["angles"], float
    else:
        raise ConfigError("missing angles (radians) or angles_deg", path)
    if not isinstance(raw, list):
        raise ConfigError("angles must be a list", f"{path}.angles")
    try:
        angles = tuple(float(conv(float(a))) for a in raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError("angles must be numbers", f"{path}.angles") from exc
    fv = d.get("field_values")
    if not isinstance(fv, list):
        raise ConfigError("field_values must be a list of objects", f"{path}.field_values")
    points = tuple(_parse_point(p, scenario, f"{path}.field_values[{k}]") for k, p in enumerate(fv))
    cfg_c = d.get("coulomb", {})
    if not isinstance(cfg_c, dict):
        raise ConfigError("coulomb must be an object", f"{path}.coulomb")
    mono = d.get("mono_valley_mass")
    try:
        return SweepSpec(
            name=str(d.get("name", f"sweep{index}")),
            scenario=scenario,
            mechanism=mechanism,
            angles=angles,
            points=points,
            photon_energy_meV=_num(d, "photon_energy_meV", path),
            mix_weights=_weights(d["mix_weights"], f"{path}.mix_weights") if "mix_weights" in d else None,
            coulomb_brace=str(cfg_c.get("brace", coulomb.DEFAULT_BRACE)),
            coulomb_classical=bool(cfg_c.get("classical", False)),
            xmin_power=int(cfg_c.get("xmin_power", 2)),
            hotfield_coefficients=str(d.get("hotfield_coefficients", "derived")),
            mono_mass=None if mono is None else _num(d, "mono_valley_mass", path),
        )
    except ConfigError as exc:
        raise ConfigError(exc.detail, f"{path}.{exc.key_path}" if exc.key_path else path) from exc


@dataclass(frozen=True)
class Config:
    material_source: Any
    material_overrides: dict = field(default_factory=dict)
    sweeps: tuple[SweepSpec, ...] = ()

    def material(self, **extra) -> MaterialParams:
        return load_material(self.material_source, **{**self.material_overrides, **extra})


def parse_config(data: Any) -> Config:
    """Validate a decoded config object; raises :class:`ConfigError` with a key path."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object", "")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r}; expected {SCHEMA_VERSION}", "schema_version")
    raw = data["sweeps"] if "sweeps" in data else [data]
    if not isinstance(raw, list) or not raw:
        raise ConfigError("sweeps must be a non-empty list", "sweeps")
    sweeps = tuple(_parse_sweep(s, f"sweeps[{k}]", k) for k, s in enumerate(raw))
    names = [s.name for s in sweeps]
    if len(set(names)) != len(names):
        raise ConfigError("sweep names must be unique", "sweeps")
    overrides = data.get("material_overrides", {})
    if not isinstance(overrides, dict):
        raise ConfigError("material_overrides must be an object", "material_overrides")
    cfg = Config(data.get("material", "n-Ge"), dict(overrides), sweeps)
    cfg.material()  # fail early on a bad material
    return cfg


def load_config(path: str | Path) -> Config:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}", "") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON at line {exc.lineno}: {exc.msg}", "") from exc
    return parse_config(data)


def _carriers(pt: SweepPoint) -> CarrierState:
    return CarrierState.field_111(pt.n1, float(kelvin_to_erg(pt.T1_K)), pt.n2, float(kelvin_to_erg(pt.T2_K)))


def _decomposition(spec: SweepSpec, mat: MaterialParams, pt: SweepPoint, omega: float, mechanism: str):
    """(a0, a2) of W(phi) = a0 + a2 cos 2phi for one channel at one point."""
    q = RadiationQuery(omega, acoustic.REFERENCE_PLANE_111[0])
    if spec.scenario == "field-100":
        model = hotfield.MonoValleyModel.from_substitution(
            mat,
            float(volt_per_cm_to_statvolt_per_cm(pt.F_V_cm)),
            0.0,
            pt.n1 * 4.0,
            float(kelvin_to_erg(pt.T1_K)),
            None if spec.mono_mass is None else spec.mono_mass * CGS.m_e,
        )
        # iso + aniso P2(cos t) = (iso + aniso/4) + (3 aniso / 4) cos 2t
        w_par = hotfield.emission_distorted(model, omega, spec.hotfield_coefficients)
        w_perp = hotfield.emission_distorted(model.with_(theta0=0.5 * math.pi), omega, spec.hotfield_coefficients)
        return 0.5 * (w_par + w_perp), 0.5 * (w_par - w_perp)
    carriers = _carriers(pt)
    if mechanism == "acoustic":
        d = acoustic.decompose_111(mat, carriers, q)
    else:
        scr = coulomb.screening_for(mat, carriers, spec.xmin_power)
        d = coulomb.decompose_111_coulomb(mat, carriers, q, scr, spec.coulomb_classical, spec.coulomb_brace)
    return d.a0, d.a2


def evaluate_point(spec: SweepSpec, mat: MaterialParams, pt: SweepPoint) -> tuple[float, float]:
    """Mechanism-combined (a0, a2) for one sweep point."""
    omega = float(ev_to_erg(spec.photon_energy_meV * 1e-3)) / CGS.hbar
    if spec.mechanism == "auto-mix":
        w_ac, w_c = pt.mix_weights or spec.mix_weights
        a0 = a2 = 0.0
        for w, mech in ((w_ac, "acoustic"), (w_c, "coulomb")):
            if w:
                b0, b2 = _decomposition(spec, mat, pt, omega, mech)
                a0 += w * b0
                a2 += w * b2
        return a0, a2
    return _decomposition(spec, mat, pt, omega, spec.mechanism)


def _oracle_for(spec: SweepSpec, mat: MaterialParams, pt: SweepPoint):
    from . import oracle

    omega = float(ev_to_erg(spec.photon_energy_meV * 1e-3)) / CGS.hbar
    if spec.scenario == "field-100":
        model = hotfield.MonoValleyModel.from_substitution(
            mat, float(volt_per_cm_to_statvolt_per_cm(pt.F_V_cm)), 0.0, pt.n1 * 4.0, float(kelvin_to_erg(pt.T1_K)),
            None if spec.mono_mass is None else spec.mono_mass * CGS.m_e,
        )
        return oracle.oracle_hotfield(model, omega, spec.hotfield_coefficients)
    T1 = float(kelvin_to_erg(pt.T1_K))
    axis = GE_VALLEYS.axes[0]
    g0 = acoustic.REFERENCE_PLANE_111[1]
    if spec.mechanism == "coulomb":
        scr = coulomb.screening_for(mat, _carriers(pt), spec.xmin_power)
        return oracle.oracle_coulomb(mat, axis, pt.n1, T1, omega, g0, scr, spec.coulomb_brace)
    return oracle.oracle_acoustic(mat, axis, pt.n1, T1, omega, g0)


def run_sweep(config, scenario: str | None = None, with_oracle: bool = False) -> list[dict[str, Any]]:
    """Evaluate every sweep (or those whose name or scenario equals ``scenario``).

    ``config`` is a path, a decoded dict, or a parsed :class:`Config`.  Rows
    come out in config order: sweep, then point, then angle.
    """
    if isinstance(config, (str, Path)):
        config = load_config(config)
    elif isinstance(config, dict):
        config = parse_config(config)
    sweeps = config.sweeps
    if scenario is not None:
        sweeps = tuple(s for s in sweeps if scenario in (s.name, s.scenario))
        if not sweeps:
            raise ConfigError(f"no sweep named or of scenario {scenario!r}", "scenario")
    rows: list[dict[str, Any]] = []
    for spec in sweeps:
        for k, pt in enumerate(spec.points):
            extra = {"T_lattice_K": pt.T_lattice_K} if pt.T_lattice_K is not None else {}
            mat = config.material(**extra)
            a0, a2 = evaluate_point(spec, mat, pt)
            report = _oracle_for(spec, mat, pt) if with_oracle else None
            for phi in spec.angles:
                row = {
                    "sweep": spec.name,
                    "scenario": spec.scenario,
                    "mechanism": spec.mechanism,
                    "point": k,
                    "F_V_cm": pt.F_V_cm,
                    "T_lattice_K": float(mat.T_lattice / CGS.kB),
                    "n1_cm3": pt.n1,
                    "T1_K": pt.T1_K,
                    "n2_cm3": pt.n2,
                    "T2_K": pt.T2_K,
                    "photon_energy_meV": spec.photon_energy_meV,
                    "phi_rad": phi,
                    "W_erg_s_cm3_sr": a0 + a2 * math.cos(2.0 * phi),
                    "A0": a0,
                    "A2": a2,
                }
                if report is not None:
                    row["oracle_relative_discrepancy"] = report.relative_discrepancy
                    row["oracle_relative_error"] = report.relative_error
                rows.append(row)
    return rows


def _fmt(v: Any) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def format_csv(rows: list[dict[str, Any]]) -> str:
    """RFC-4180 CSV text (CRLF line ends, header first, floats at 17 significant digits)."""
    if not rows:
        raise ValueError("table is empty")
    cols = list(CSV_COLUMNS) + [c for c in ORACLE_COLUMNS if c in rows[0]]
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in cols])
    return buf.getvalue()


def emit_csv(rows: list[dict[str, Any]], path: str | Path) -> Path:
    path = Path(path)
    text = format_csv(rows)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def emit_json(rows: list[dict[str, Any]], path: str | Path | None = None) -> str:
    text = json.dumps({"schema_version": SCHEMA_VERSION, "rows": rows}, indent=1, sort_keys=True) + "\n"
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return text
