"""Command-line entry point: ``reanneal <command> [--config FILE] [options]``.

Every output file starts with ``#`` header lines that record the tool
version, master seed and fully resolved configuration. Passing such a file
back through ``--config`` reproduces it byte for byte.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, _backend
from . import experiments as ex
from .errors import CapacityError, ConfigError

EXIT_OK, EXIT_CONFIG, EXIT_CAPACITY, EXIT_CHECK = 0, 2, 3, 4


def header(command: str, cfg: dict) -> list[str]:
    lines = [
        f"# reanneal {__version__} {command}",
        f"# master seed: {cfg['seed']} (task k uses SeedSequence(seed, spawn_key=k))",
    ]
    if cfg["desk_scale"]:
        keys = ", ".join(ex.RUN_COUNT_KEYS.get(command, ())) or "none"
        lines.append(f"# desk scale: run counts ({keys}) divided by {ex.DESK_FACTOR}; "
                     f"absolute tolerances widened by sqrt({ex.DESK_FACTOR})")
    else:
        lines.append("# desk scale: off")
    lines += [f"# config: {line}" for line in ex.config_lines(cfg)]
    return lines


def _cell(x) -> str:
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def render_csv(columns, rows) -> list[str]:
    return [",".join(columns)] + [",".join(_cell(c) for c in row) for row in rows]


def run_checks(command: str, cfg: dict, columns, rows) -> list[tuple[str, bool, str]]:
    tol = math.sqrt(ex.DESK_FACTOR) if cfg["desk_scale"] else 1.0
    if command == "teff-curve":
        return ex.check_teff_curve(rows)
    if command == "fig-range":
        return ex.check_fig_range(rows, n_spins=ex.load_problem(cfg).n, tol_scale=tol)
    if command == "fig-local-search":
        return ex.check_fig_local_search(rows, cfg["n_starts"])
    if command == "noise":
        return ex.check_noise(cfg["mode"], rows)
    return []


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reanneal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"reanneal {__version__} ({_backend.NAME})")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ex.COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="flat key = value file (an earlier output also works)")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override one config key; may repeat")
        p.add_argument("--seed", type=int, help="master seed (overrides the config)")
        p.add_argument("--desk-scale", action="store_true", help=f"divide run counts by {ex.DESK_FACTOR}")
        p.add_argument("--out", type=Path, help="output path (default: stdout)")
        p.add_argument("--check", action="store_true", help="evaluate the figure's property checks")
        p.add_argument("--workers", type=int, default=1, help="worker processes; results do not depend on it")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        raw = ex.parse_config_text(args.config.read_text()) if args.config else {}
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            k, v = item.split("=", 1)
            raw[k.strip()] = v.strip()
        if args.seed is not None:
            raw["seed"] = str(args.seed)
        cfg = ex.resolve_config(args.command, raw, desk_scale=args.desk_scale)
        lines = header(args.command, cfg)
        checks = []
        if args.command in ex.CSV_DRIVERS:
            driver = ex.CSV_DRIVERS[args.command]
            kw = {"workers": args.workers} if args.command in ex.WORKER_AWARE else {}
            columns, rows = driver(cfg, **kw)
            lines += render_csv(columns, rows)
            if args.check:
                checks = run_checks(args.command, cfg, columns, rows)
        else:
            lines += ex.JSONL_DRIVERS[args.command](cfg)
    except OSError as exc:
        print(f"reanneal: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        print(f"reanneal: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"reanneal: capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"reanneal: invalid setting: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    text = "\n".join(lines) + "\n"
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    if args.check:
        if not checks:
            print(f"check: no property checks defined for {args.command}", file=sys.stderr)
        for name, ok, detail in checks:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}", file=sys.stderr)
        if not all(ok for _, ok, _ in checks):
            return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
