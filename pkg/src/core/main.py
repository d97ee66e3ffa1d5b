import os
import sys

from typing import List, Optional

from pydantic import ValidationError

from core.args import parse_args
from core.globals import ENV_DEBUG
from core.logger import init_logger, info, error, exception
from core.commands.cmd_abstract import UsageError
from core.commands.commands import get_command


EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


def _describe(e: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
        for err in e.errors()
    )


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 after --help / --version
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    debug_on = args.debug or os.environ.get(ENV_DEBUG, "") not in ("", "0")
    init_logger(debug_on, args.out / "logs" if args.out is not None else None)
    info(f"Running '{args.command}'")

    try:
        return get_command(args.command).run(args)
    except ValidationError as e:
        error(f"invalid configuration: {_describe(e)}")
        return EXIT_USAGE
    except UsageError as e:
        error(str(e))
        return EXIT_USAGE
    except OSError as e:
        error(str(e))
        return EXIT_RUNTIME
    except Exception as e:
        exception(f"'{args.command}' failed: {e}")
        return EXIT_RUNTIME


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
