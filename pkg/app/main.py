import argparse
import sys
from typing import List, Optional

from app.api import commands
from app.core.config import settings
from app.core.exceptions import EngineError, NotGeneratingError, TheoremViolationError
from app.utils.logger import app_logger
from app.utils.streaming import write_output


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weyl-hurwitz",
        description="Braid group actions on Hurwitz systems of reflections in Weyl groups",
    )
    parser.add_argument("--version", action="version", version=f"{settings.APP_NAME} {settings.APP_VERSION}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--jobs", type=_positive, default=None, help=f"worker processes (default {settings.JOBS})")
    common.add_argument("--subgroup-cap", type=_positive, default=None,
                        help=f"subgroup closure cap (default {settings.SUBGROUP_CAP})")
    common.add_argument("--orbit-cap", type=_positive, default=None,
                        help=f"braid orbit / pair-up node cap (default {settings.ORBIT_NODE_CAP})")
    common.add_argument("--enumeration-cap", type=_positive, default=None,
                        help=f"enumerated systems cap (default {settings.ENUMERATION_CAP})")

    sub = parser.add_subparsers(dest="command", required=True)

    roots = sub.add_parser("roots", parents=[common], help="construct a root system")
    roots.add_argument("spec", help="e.g. A2, G2, B3+A1")

    validate = sub.add_parser("validate", parents=[common], help="validate a Hurwitz system file")
    validate.add_argument("input")

    move = sub.add_parser("move", parents=[common], help="apply braid moves to a system")
    move.add_argument("input")
    action = move.add_mutually_exclusive_group(required=True)
    action.add_argument("--moves", help="signed braid indices, e.g. '1,-2,3'")
    action.add_argument("--replay", metavar="LOG", help="replay a move log from its source system")
    action.add_argument("--op", choices=commands.OPERATIONS, help="composite operation")
    move.add_argument("--word", help="1-based entry indices for conjugate / conjugate-pair")
    move.add_argument("--at", type=_positive, help="pair position for move-pair / conjugate-pair")
    move.add_argument("--to", type=_positive, help="destination for move-pair")

    normal = sub.add_parser("normal-form", parents=[common], help="reduce a system to normal form")
    normal.add_argument("input")
    normal.add_argument("--anchors", help="JSON list of roots replacing the canonical alpha / beta")

    nielsen = sub.add_parser("nielsen-reduce", parents=[common], help="Nielsen-reduce a set of reflections")
    nielsen.add_argument("--spec", required=True)
    nielsen.add_argument("--axes", required=True, help="JSON list of roots")

    orbit = sub.add_parser("orbit", parents=[common], help="braid orbit of a system")
    orbit.add_argument("input")

    verify = sub.add_parser("verify", parents=[common], help="check irreducibility for branching data")
    verify.add_argument("--spec", required=True)
    verify.add_argument("--branching", required=True, help="e.g. n=4, ns=2,nl=2 or A2:n=4;G2:ns=2,nl=2")

    matrix = sub.add_parser("matrix", parents=[common], help="verify every cell of a manifest")
    matrix.add_argument("--manifest", required=True, help="JSON-lines file of {spec, branching}")

    return parser


def _dispatch(args: argparse.Namespace) -> None:
    caps = dict(
        enumeration_cap=args.enumeration_cap,
        orbit_cap=args.orbit_cap,
        subgroup_cap=args.subgroup_cap,
        jobs=args.jobs,
    )
    if args.command == "roots":
        write_output(commands.roots_command(args.spec), args.out)
    elif args.command == "validate":
        write_output(commands.validate_command(args.input), args.out)
    elif args.command == "move":
        result = commands.move_command(
            args.input,
            moves=args.moves,
            replay_path=args.replay,
            operation=args.op,
            word=args.word,
            position=args.at,
            target=args.to,
            cap=args.orbit_cap,
        )
        write_output(result, args.out)
    elif args.command == "normal-form":
        write_output(commands.normal_form_command(args.input, args.anchors, args.orbit_cap), args.out)
    elif args.command == "nielsen-reduce":
        write_output(commands.nielsen_reduce_command(args.spec, args.axes), args.out)
    elif args.command == "orbit":
        write_output(commands.orbit_command(args.input, args.orbit_cap), args.out)
    elif args.command == "verify":
        write_output(commands.verify_command(args.spec, args.branching, **caps), args.out)
    elif args.command == "matrix":
        write_output(commands.matrix_command(args.manifest, **caps), args.out, lines=True)


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one command

    Args:
        argv: Arguments without the program name; sys.argv[1:] when None

    Returns:
        int: 0 on success, 1 on invalid input, 2 when a cap is exceeded,
        3 when a checked theorem fails
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse uses 2 for usage errors, which is reserved for caps here
        return 0 if e.code in (0, None) else 1

    try:
        _dispatch(args)
    except NotGeneratingError as e:
        app_logger.error(f"{e} (base {e.base})")
        return e.exit_code
    except TheoremViolationError as e:
        app_logger.critical(f"Theorem violation: {e}; details: {e.details}")
        return e.exit_code
    except EngineError as e:
        app_logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except ValueError as e:
        app_logger.error(f"Invalid argument: {e}")
        return 1
    except OSError as e:
        app_logger.error(f"Cannot access {e.filename or 'file'}: {e.strerror or e}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(run())
