"""Regenerate tests/data/bessel_reference.json with 50-digit mpmath values."""

import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 50
OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "bessel_reference.json"


def main():
    xs = [mp.mpf(10) ** (mp.mpf(-6) + k * (mp.log10(700) + 6) / 99) for k in range(100)]
    rows = [{"x": mp.nstr(x, 40), "k0": mp.nstr(mp.besselk(0, x), 40), "k1": mp.nstr(mp.besselk(1, x), 40)} for x in xs]
    OUT.write_text(json.dumps({"digits": 50, "points": rows}, indent=1) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
