import json
import math
from pathlib import Path

import pytest

from hotemission.core import CGS, GE_VALLEYS, load_material, kelvin_to_erg

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def ge():
    return load_material("n-Ge")


@pytest.fixture(scope="session")
def bessel_reference():
    return json.loads((DATA / "bessel_reference.json").read_text())["points"]


def omega_for(a: float, T_e: float) -> float:
    """Angular frequency giving hbar w / (2 T_e) = a."""
    return 2.0 * a * T_e / CGS.hbar


def kelvin(t: float) -> float:
    return float(kelvin_to_erg(t))


def rel(x, y):
    return abs(x - y) / max(abs(x), abs(y))


VALLEYS = GE_VALLEYS
PI = math.pi


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str, elapsed: float, budget: float) -> bool:
        ok_all = ok and elapsed < budget
        line = f"[{'PASS' if ok_all else 'FAIL'}] criterion {number:2d} {title}: {detail} ({elapsed:.2f} s, budget {budget:g} s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok_all

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
