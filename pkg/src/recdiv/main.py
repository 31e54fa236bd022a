from __future__ import annotations
import argparse
import sys
from typing import List, Optional

from . import __version__
from .commands import census as census_commands
from .commands import constructions as construction_commands
from .commands import fields as field_commands
from .commands import lucas as lucas_commands
from .commands import smooth as smooth_commands
from .core.errors import run_guarded
from .core.logging import get_logger

log = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recdiv",
        description="Experiments on n | u_n for integer linear recurrences.",
    )
    parser.add_argument("--version", action="version", version=f"recdiv {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    census_commands.register(sub)
    lucas_commands.register(sub)
    field_commands.register(sub)
    smooth_commands.register(sub)
    construction_commands.register(sub)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help/--version
        return int(exc.code or 0)
    log.debug("command.start name=%s", args.command)
    return run_guarded(lambda: args.handler(args))


if __name__ == "__main__":
    sys.exit(main())
