import copy
import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from hotemission import cli
from hotemission.acoustic import decompose_111
from hotemission.core import CGS, CarrierState, ConfigError, RadiationQuery, ev_to_erg, kelvin_to_erg, load_material
from hotemission.sweepio import CSV_COLUMNS, emit_csv, format_csv, parse_config, run_sweep

ROOT = Path(__file__).resolve().parents[1]
SPECIMEN = ROOT / "configs" / "specimen_111.json"

BASE = {
    "schema_version": 1,
    "material": "n-Ge",
    "sweeps": [
        {
            "name": "s",
            "scenario": "field-111",
            "mechanism": "acoustic",
            "photon_energy_meV": 0.2,
            "angles": [0.0, 0.5, 1.0],
            "field_values": [
                {"F_V_cm": 5, "n1": 1e14, "T1_K": 20, "n2": 1e14, "T2_K": 40},
                {"F_V_cm": 9, "n1": 1e14, "T1_K": 25, "n2": 2e14, "T2_K": 30},
            ],
        }
    ],
}


def cfg(**changes):
    c = copy.deepcopy(BASE)
    c["sweeps"][0].update(changes)
    return c


def test_row_count_and_header():
    rows = run_sweep(BASE)
    assert len(rows) == 3 * 2
    header = format_csv(rows).split("\r\n")[0]
    assert header == ",".join(CSV_COLUMNS)


def test_rows_reproducible_by_library_call():
    rows = run_sweep(BASE)
    mat = load_material("n-Ge")
    for r in rows:
        c = CarrierState.field_111(r["n1_cm3"], kelvin_to_erg(r["T1_K"]), r["n2_cm3"], kelvin_to_erg(r["T2_K"]))
        omega = ev_to_erg(r["photon_energy_meV"] * 1e-3) / CGS.hbar
        d = decompose_111(mat, c, RadiationQuery(omega, (1 / math.sqrt(3),) * 3))
        assert r["W_erg_s_cm3_sr"] == pytest.approx(d(r["phi_rad"]), rel=1e-14)


def test_pi_periodicity():
    rows = run_sweep(cfg(angles=[0.3, 0.3 + math.pi]))
    assert rows[0]["W_erg_s_cm3_sr"] == pytest.approx(rows[1]["W_erg_s_cm3_sr"], rel=1e-12)


def test_field_100_zero_field_is_flat():
    c = cfg(
        scenario="field-100",
        angles_deg=[0, 30, 60, 90, 120],
        field_values=[{"F_V_cm": 0, "n": 1e15, "T_e_K": 20}],
    )
    del c["sweeps"][0]["angles"]
    w = [r["W_erg_s_cm3_sr"] for r in run_sweep(c)]
    assert max(w) / min(w) - 1 < 1e-12


def test_acoustic_and_coulomb_extrema_swap():
    rows = run_sweep(SPECIMEN)
    for name, sign in (("specimen-acoustic", 1), ("specimen-coulomb", -1)):
        for r in (r for r in rows if r["sweep"] == name):
            assert math.copysign(1, r["A2"]) == sign


def test_auto_mix_is_weighted_sum():
    ac = run_sweep(cfg(mechanism="acoustic"))
    co = run_sweep(cfg(mechanism="coulomb"))
    mix = run_sweep(cfg(mechanism="auto-mix", mix_weights={"acoustic": 0.25, "coulomb": 2.0}))
    for a, c, m in zip(ac, co, mix):
        assert m["W_erg_s_cm3_sr"] == pytest.approx(0.25 * a["W_erg_s_cm3_sr"] + 2.0 * c["W_erg_s_cm3_sr"], rel=1e-13)


@pytest.mark.parametrize(
    "change,key",
    [
        ({"scenario": "field-222"}, "sweeps[0].scenario"),
        ({"mechanism": "phonons"}, "sweeps[0].mechanism"),
        ({"mechanism": "auto-mix"}, "sweeps[0].mix_weights"),
        ({"angles": []}, "sweeps[0].angles"),
        ({"angles": [7.0]}, "sweeps[0].angles"),
        ({"field_values": [{"F_V_cm": -1, "n1": 1, "T1_K": 1, "n2": 1, "T2_K": 1}]}, "sweeps[0].field_values[0].F_V_cm"),
        ({"field_values": [{"F_V_cm": 1, "n1": 1, "T1_K": 1, "n2": 1}]}, "sweeps[0].field_values[0]"),
    ],
)
def test_config_errors_carry_key_path(change, key):
    with pytest.raises(ConfigError) as exc:
        parse_config(cfg(**change))
    assert exc.value.key_path == key


def test_schema_version_checked():
    with pytest.raises(ConfigError) as exc:
        parse_config({**BASE, "schema_version": 2})
    assert exc.value.key_path == "schema_version"


def test_emit_csv_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(run_sweep(SPECIMEN), a)
    emit_csv(run_sweep(SPECIMEN), b)
    assert a.read_bytes() == b.read_bytes()
    parsed = list(csv.DictReader(io.StringIO(a.read_text())))
    assert float(parsed[0]["W_erg_s_cm3_sr"]) == run_sweep(SPECIMEN)[0]["W_erg_s_cm3_sr"]


def test_emit_csv_errors(tmp_path):
    with pytest.raises(ValueError):
        format_csv([])
    with pytest.raises(OSError, match="cannot write"):
        emit_csv(run_sweep(BASE), tmp_path / "missing" / "x.csv")


def test_cli_csv_and_json(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(BASE))
    assert cli.main(["--config", str(path)]) == 0
    out = capsys.readouterr().out
    assert out.startswith("sweep,scenario")
    assert cli.main(["--config", str(path), "--format", "json", "--scenario", "field-111"]) == 0
    assert len(json.loads(capsys.readouterr().out)["rows"]) == 6


def test_cli_error_is_json(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg(mechanism="phonons")))
    assert cli.main(["--config", str(path)]) != 0
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "ConfigError"
    assert err["key_path"] == "sweeps[0].mechanism"
    assert cli.main(["--config", str(path.with_name("nope.json"))]) != 0


def test_cli_oracle_columns(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg(field_values=BASE["sweeps"][0]["field_values"][:1])))
    assert cli.main(["--config", str(path), "--oracle", "--out", str(tmp_path / "o.csv")]) == 0
    rows = list(csv.DictReader(open(tmp_path / "o.csv", newline="")))
    assert float(rows[0]["oracle_relative_discrepancy"]) < 5e-3


def test_console_script_runs(tmp_path):
    out = tmp_path / "specimen.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "hotemission.cli", "--config", str(SPECIMEN), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.read_bytes().count(b"\r\n") == 1 + 2 * 3 * 12
