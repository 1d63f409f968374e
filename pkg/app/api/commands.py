"""
One handler per CLI command; each returns pydantic models ready for output
"""
from typing import Iterator, Optional

from app.core.exceptions import DomainError
from app.models.hurwitz import MoveLog
from app.models.report import OrbitReport, OrbitResult, TransformResult, ValidationResult, NielsenResult
from app.models.rootsys import RootSystemPayload
from app.services.hurwitz import (
    HurwitzSystem,
    apply_move,
    branching_signature,
    conjugate_pair,
    conjugate_system,
    move_adjacent_inverse_pair,
    replay,
    rotate_left,
    rotate_right,
    stable_hash,
)
from app.services.nielsen import nielsen_reduce, to_result
from app.services.normal_form import normal_form, pair_up, split_components
from app.services.orbits import braid_orbit, verify_irreducibility
from app.services.parser import (
    load_log,
    load_manifest,
    load_system,
    parse_axes,
    parse_branching,
    parse_moves,
    parse_spec,
    parse_word,
)
from app.services.rootsys import build_root_system, to_payload
from app.utils.logger import app_logger

OPERATIONS = ("rotate-left", "rotate-right", "conjugate", "move-pair", "conjugate-pair", "split", "pair-up")


def roots_command(spec: str) -> RootSystemPayload:
    """
    Construct a root system and return its data
    """
    rs = build_root_system(parse_spec(spec))
    return to_payload(rs)


def validate_command(path: str) -> ValidationResult:
    """
    Validate a system file; invalid systems raise a DomainError
    """
    system = load_system(path)
    app_logger.info(f"Validated {len(system)}-entry system over {system.rs.spec.label}")
    return ValidationResult(
        valid=True,
        system=system.to_payload(),
        hash=stable_hash(system),
        branching=str(branching_signature(system)),
    )


def _apply_moves(system: HurwitzSystem, moves_text: str) -> TransformResult:
    moves = parse_moves(moves_text)
    current = system
    for move in moves:
        current = apply_move(current, move)
    log = MoveLog(moves=moves, source_hash=stable_hash(system), target_hash=stable_hash(current))
    return TransformResult(source=system.to_payload(), system=current.to_payload(), log=log)


def move_command(
    path: str,
    moves: Optional[str] = None,
    replay_path: Optional[str] = None,
    operation: Optional[str] = None,
    word: Optional[str] = None,
    position: Optional[int] = None,
    target: Optional[int] = None,
    cap: Optional[int] = None,
) -> TransformResult:
    """
    Transform a system by explicit moves, a replayed log, or a named composite

    Args:
        path: System file
        moves: Comma-separated signed braid indices, e.g. '1,-2'
        replay_path: Log file (or transforming command output) to replay
        operation: One of OPERATIONS
        word: 1-based entry indices for conjugate / conjugate-pair
        position: Pair position for move-pair / conjugate-pair
        target: Destination of move-pair
        cap: Node cap for pair-up

    Returns:
        TransformResult: Source, transformed system and log
    """
    system = load_system(path)
    if replay_path is not None:
        log = load_log(replay_path)
        result = replay(system, log)
        return TransformResult(source=system.to_payload(), system=result.to_payload(), log=log)
    if moves is not None:
        return _apply_moves(system, moves)

    indices = parse_word(word or "")
    handlers = {
        "rotate-left": lambda: rotate_left(system),
        "rotate-right": lambda: rotate_right(system),
        "conjugate": lambda: conjugate_system(system, indices),
        "move-pair": lambda: move_adjacent_inverse_pair(system, position, target),
        "conjugate-pair": lambda: conjugate_pair(system, position, indices),
        "split": lambda: split_components(system),
        "pair-up": lambda: pair_up(system, cap),
    }
    if operation not in handlers:
        raise DomainError(f"unknown operation {operation!r}")
    if operation in ("move-pair", "conjugate-pair") and position is None:
        raise DomainError(f"{operation} needs --at")
    if operation == "move-pair" and target is None:
        raise DomainError("move-pair needs --to")

    result, log = handlers[operation]()
    app_logger.info(f"{operation}: {len(log)} moves")
    return TransformResult(source=system.to_payload(), system=result.to_payload(), log=log)


def normal_form_command(path: str, anchors: Optional[str] = None, cap: Optional[int] = None) -> TransformResult:
    """
    Reduce a system to normal form; the output always carries the move log
    """
    system = load_system(path)
    result, log = normal_form(system, parse_axes(anchors) if anchors else None, cap)
    return TransformResult(source=system.to_payload(), system=result.to_payload(), log=log)


def nielsen_reduce_command(spec: str, axes: str) -> NielsenResult:
    rs = build_root_system(parse_spec(spec))
    return to_result(rs, nielsen_reduce(rs, parse_axes(axes)))


def orbit_command(path: str, cap: Optional[int] = None) -> OrbitResult:
    """
    Braid orbit of a system, members sorted by stable hash
    """
    system = load_system(path)
    members = sorted(braid_orbit(system, cap), key=stable_hash)
    return OrbitResult(
        rootsystem=system.rs.spec.label,
        size=len(members),
        members=[{"hash": stable_hash(m), "axes": [list(a) for a in m.axes]} for m in members],
    )


def verify_command(
    spec: str,
    branching: str,
    enumeration_cap: Optional[int] = None,
    orbit_cap: Optional[int] = None,
    subgroup_cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> OrbitReport:
    parsed = parse_spec(spec)
    return verify_irreducibility(
        parsed,
        parse_branching(branching, parsed),
        enumeration_cap=enumeration_cap,
        orbit_cap=orbit_cap,
        subgroup_cap=subgroup_cap,
        jobs=jobs,
    )


def matrix_command(
    manifest: str,
    enumeration_cap: Optional[int] = None,
    orbit_cap: Optional[int] = None,
    subgroup_cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> Iterator[OrbitReport]:
    """
    Run verify for every manifest line, yielding one report per line
    """
    entries = load_manifest(manifest)
    app_logger.info(f"Running verification matrix of {len(entries)} cells")
    for entry in entries:
        yield verify_command(entry.spec, entry.branching, enumeration_cap, orbit_cap, subgroup_cap, jobs)
