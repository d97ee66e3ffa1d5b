import argparse

from pathlib import Path
from typing import List, Optional

from core.globals import VERSION
from core.commands.cmd_utils import FORMATS, parse_formats, parse_override
from core.commands.commands import COMMANDS


__all__ = ["build_parser", "parse_args"]


def _seed(value: str) -> int:
    seed = int(value)
    if not 0 <= seed < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {value}")
    return seed


def _common_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", type=Path, help="JSON config file (overrides the built-in defaults)")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument("--seed", type=_seed, help="root seed (unsigned 64-bit)")
    parser.add_argument(
        "--format",
        dest="formats",
        type=parse_formats,
        default=frozenset(FORMATS),
        help=f"comma list of output formats from {','.join(FORMATS)} (default: all)",
    )
    parser.add_argument(
        "--set",
        dest="overrides",
        type=parse_override,
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="config override, dotted keys reach nested fields; repeatable",
    )
    parser.add_argument("--debug", action="store_true", help="log at DEBUG level")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hmmdd",
        description="Double-descent risk curves for head-tuned linear prediction on HMM representations.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    common = _common_parser()

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for command in COMMANDS:
        sub = subparsers.add_parser(command.name, parents=[common], help=command.help, description=command.help)
        command.add_arguments(sub)
    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    return build_parser().parse_args(argv)
