"""Command-line entry point: ``hotemission --config sweep.json [--out table.csv]``."""

from __future__ import annotations

import argparse
import json
import sys

from .core import ConfigError
from .quadrature import QuadratureError
from .sweepio import emit_csv, emit_json, format_csv, run_sweep


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hotemission",
        description="Polarisation sweeps of hot-electron spontaneous emission.",
    )
    p.add_argument("--config", required=True, help="JSON sweep configuration")
    p.add_argument("--scenario", help="run only the sweep with this name or scenario type")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--oracle", action="store_true", help="attach brute-force oracle comparisons per point")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def _fail(kind: str, message: str, key_path: str | None = None, code: int = 2) -> int:
    err = {"error": kind, "message": message}
    if key_path is not None:
        err["key_path"] = key_path
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows = run_sweep(args.config, args.scenario, args.oracle)
        if args.format == "csv":
            if args.out:
                emit_csv(rows, args.out)
            else:
                sys.stdout.write(format_csv(rows))
        else:
            text = emit_json(rows, args.out)
            if not args.out:
                sys.stdout.write(text)
    except ConfigError as exc:
        return _fail("ConfigError", exc.detail, exc.key_path)
    except QuadratureError as exc:
        return _fail("QuadratureError", str(exc), code=3)
    except (ValueError, OSError) as exc:
        return _fail(type(exc).__name__, str(exc), code=1)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
