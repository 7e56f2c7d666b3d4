"""Regenerate tests/golden/*.out from the neighbouring *.cfg files.

Run after an intentional change to an output format or a driver's random
stream, then review the diff.
"""
import contextlib
import io
import sys
from pathlib import Path

from reanneal.cli import main
from reanneal.experiments import COMMANDS

GOLDEN = Path(__file__).resolve().parents[1] / "tests" / "golden"


def command_of(stem: str) -> str:
    return max((c for c in COMMANDS if stem == c or stem.startswith(c + "-")), key=len)


def render(cfg: Path) -> str:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main([command_of(cfg.stem), "--config", str(cfg)])
    if code:
        sys.exit(f"{cfg.name}: exit {code}")
    return buf.getvalue()


if __name__ == "__main__":
    for cfg in sorted(GOLDEN.glob("*.cfg")):
        cfg.with_suffix(".out").write_text(render(cfg))
        print("wrote", cfg.with_suffix(".out").name)
