"""
Hurwitz systems of reflections and the braid group action on them

A system is stored as a tuple of positive-root indices. The elementary
braid sigma_i acts on entries i, i+1 (1-based) by

    forward  (a, b) -> (a b a^-1, a)
    inverse  (a, b) -> (b, b^-1 a b)

Every composite operation returns the transformed system together with a
MoveLog whose replay from the input reproduces it exactly.
"""
import random
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.core.exceptions import (
    MoveIndexError,
    NotHurwitzError,
    PreconditionError,
    ReplayMismatchError,
)
from app.models.hurwitz import BraidMove, BranchingData, ComponentBranching, MoveLog, SystemPayload
from app.services.rootsys import LONG, RootSystem, RootVector, check_root
from app.services.weyl import Reflection, WeylElement, reflection_by_index
from app.utils.logger import app_logger
from app.utils.streaming import stable_digest


@dataclass(frozen=True)
class HurwitzSystem:
    """(t_1, ..., t_n) with t_1...t_n = 1, entries given by positive-root index"""
    rs: RootSystem
    indices: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def axes(self) -> Tuple[RootVector, ...]:
        return tuple(self.rs.positive_roots[k] for k in self.indices)

    @property
    def entries(self) -> Tuple[Reflection, ...]:
        return tuple(reflection_by_index(self.rs, k) for k in self.indices)

    @property
    def hash(self) -> str:
        return stable_hash(self.axes)

    def with_indices(self, indices: Sequence[int]) -> "HurwitzSystem":
        return HurwitzSystem(self.rs, tuple(indices))

    def to_payload(self) -> SystemPayload:
        return SystemPayload(rootsystem=self.rs.spec.label, axes=[list(axis) for axis in self.axes])


def stable_hash(axes: Union[HurwitzSystem, Iterable[Sequence[int]]]) -> str:
    """
    Cross-run stable 64-bit hash of an axis tuple

    blake2b (digest size 8) over the canonical JSON of the list of axes.
    """
    if isinstance(axes, HurwitzSystem):
        axes = axes.axes
    return stable_digest([list(axis) for axis in axes])


def product_matrix(rs: RootSystem, indices: Sequence[int]) -> np.ndarray:
    result = np.eye(rs.rank, dtype=np.int64)
    for k in indices:
        result = result @ rs.reflection_matrices[k]
    return result


def system_product(system: HurwitzSystem) -> WeylElement:
    """t_1 t_2 ... t_n, left to right"""
    return WeylElement(product_matrix(system.rs, system.indices))


def make_system(rs: RootSystem, axes: Sequence[Sequence[int]]) -> HurwitzSystem:
    """
    Validate a tuple of reflection axes as a Hurwitz system

    Args:
        rs: Root system
        axes: One root per entry; sign is irrelevant

    Returns:
        HurwitzSystem: The validated system

    Raises:
        NotHurwitzError: Empty tuple, or product is not the identity
        NotARootError: An axis is not a root
    """
    if not axes:
        raise NotHurwitzError("a Hurwitz system needs at least one entry")
    indices = tuple(rs.index_of(check_root(rs, axis)) for axis in axes)
    if not np.array_equal(product_matrix(rs, indices), np.eye(rs.rank, dtype=np.int64)):
        raise NotHurwitzError(f"product of the {len(indices)} reflections is not the identity")
    return HurwitzSystem(rs, indices)


def branching_signature(system: HurwitzSystem) -> BranchingData:
    """Entry counts per component and length class"""
    rs = system.rs
    short = [0] * len(rs.spec.components)
    long = [0] * len(rs.spec.components)
    for k in system.indices:
        c = rs.root_components[k]
        if rs.length_classes[k] == LONG:
            long[c] += 1
        else:
            short[c] += 1

    parts = []
    for c, component in enumerate(rs.spec.components):
        if component.simply_laced:
            parts.append(ComponentBranching(component=component, n=short[c]))
        else:
            parts.append(ComponentBranching(component=component, n_s=short[c], n_l=long[c]))
    return BranchingData(components=tuple(parts))


def class_multiset(system: HurwitzSystem) -> Tuple[int, ...]:
    """Sorted W-conjugacy classes of the entries"""
    return tuple(sorted(system.rs.reflection_class(k) for k in system.indices))


def braid_step(table: List[List[int]], indices: List[int], p: int, forward: bool) -> None:
    """Apply sigma_{p+1} (or its inverse) in place; p is 0-based"""
    a, b = indices[p], indices[p + 1]
    if forward:
        indices[p], indices[p + 1] = table[a][b], a
    else:
        indices[p], indices[p + 1] = b, table[b][a]


class _MoveRecorder:
    """Mutable working copy of a system that logs every elementary move"""

    def __init__(self, system: HurwitzSystem):
        self.source = system
        self.table = system.rs.conjugation_table
        self.indices = list(system.indices)
        self.moves: List[Tuple[int, bool]] = []

    def __len__(self) -> int:
        return len(self.indices)

    def step(self, p: int, forward: bool) -> None:
        braid_step(self.table, self.indices, p, forward)
        self.moves.append((p, forward))

    def system(self) -> HurwitzSystem:
        return self.source.with_indices(self.indices)

    def finish(self) -> Tuple[HurwitzSystem, MoveLog]:
        target = self.system()
        log = MoveLog(
            moves=[BraidMove(index=p + 1, direction="forward" if fwd else "inverse") for p, fwd in self.moves],
            source_hash=stable_hash(self.source),
            target_hash=stable_hash(target),
        )
        return target, log


def _check_position(system: HurwitzSystem, index: int, what: str, last: Optional[int] = None) -> int:
    last = len(system) if last is None else last
    if not 1 <= index <= last:
        raise MoveIndexError(f"{what} {index} out of range 1..{last}")
    return index - 1


def apply_move(system: HurwitzSystem, move: BraidMove) -> HurwitzSystem:
    """
    Apply one elementary braid

    Args:
        system: Hurwitz system
        move: sigma_i or its inverse, 1 <= i <= n-1

    Returns:
        HurwitzSystem: The transformed system
    """
    p = _check_position(system, move.index, "braid index", len(system) - 1)
    indices = list(system.indices)
    braid_step(system.rs.conjugation_table, indices, p, move.forward)
    return system.with_indices(indices)


def replay(source: HurwitzSystem, log: MoveLog) -> HurwitzSystem:
    """
    Fold a move log over its source system

    Raises:
        ReplayMismatchError: Source or target hash does not match the log
    """
    if stable_hash(source) != log.source_hash:
        raise ReplayMismatchError(f"source hash {stable_hash(source)} does not match log {log.source_hash}")
    table = source.rs.conjugation_table
    indices = list(source.indices)
    for move in log.moves:
        if not 1 <= move.index <= len(indices) - 1:
            raise MoveIndexError(f"braid index {move.index} out of range 1..{len(indices) - 1}")
        braid_step(table, indices, move.index - 1, move.forward)
    target = source.with_indices(indices)
    if stable_hash(target) != log.target_hash:
        raise ReplayMismatchError(f"replay ended at {stable_hash(target)}, log expects {log.target_hash}")
    app_logger.debug(f"Replayed {len(log.moves)} moves")
    return target


def invert_log(log: MoveLog) -> MoveLog:
    """Log taking the target back to the source"""
    return MoveLog(
        moves=[move.inverted() for move in reversed(log.moves)],
        source_hash=log.target_hash,
        target_hash=log.source_hash,
    )


# Composite moves on a recorder, positions 0-based

def _rotate_left(rec: _MoveRecorder) -> None:
    for p in range(len(rec) - 1):
        rec.step(p, False)


def _rotate_right(rec: _MoveRecorder) -> None:
    for p in range(len(rec) - 2, -1, -1):
        rec.step(p, True)


def _conjugate_by_entry(rec: _MoveRecorder, j: int) -> None:
    # bring t_j to the front, push it through the tuple, then rotate back
    for _ in range(j):
        _rotate_left(rec)
    for p in range(len(rec) - 1):
        rec.step(p, True)
    for _ in range(j + 1):
        _rotate_right(rec)


def _move_pair(rec: _MoveRecorder, frm: int, to: int) -> None:
    while frm > to:
        # (u, t, t) -> (t, tut, t) -> (t, t, u)
        rec.step(frm - 1, False)
        rec.step(frm, False)
        frm -= 1
    while frm < to:
        # (t, t, u) -> (t, tut, t) -> (u, t, t)
        rec.step(frm + 1, True)
        rec.step(frm, True)
        frm += 1


def _conjugate_pair(rec: _MoveRecorder, pair_at: int, word: Sequence[int]) -> None:
    others = [q for q in range(len(rec)) if q not in (pair_at, pair_at + 1)]
    slot_of = {q: m for m, q in enumerate(others)}
    current = pair_at
    for q in reversed(word):
        m = slot_of[q]
        _move_pair(rec, current, m + 1)
        # (u, t, t) -> (utu, u, t) -> (utu, utu, u)
        rec.step(m, True)
        rec.step(m + 1, True)
        current = m
    _move_pair(rec, current, pair_at)


def _check_pair(system: HurwitzSystem, index: int, what: str) -> int:
    p = _check_position(system, index, what, len(system) - 1)
    if system.indices[p] != system.indices[p + 1]:
        raise PreconditionError(f"entries {index} and {index + 1} are not an inverse pair")
    return p


def rotate_left(system: HurwitzSystem) -> Tuple[HurwitzSystem, MoveLog]:
    """(t_1, t_2, ..., t_n) -> (t_2, ..., t_n, t_1) by sigma_1^-1 ... sigma_{n-1}^-1"""
    rec = _MoveRecorder(system)
    _rotate_left(rec)
    return rec.finish()


def rotate_right(system: HurwitzSystem) -> Tuple[HurwitzSystem, MoveLog]:
    """(t_1, ..., t_n) -> (t_n, t_1, ..., t_{n-1}) by sigma_{n-1} ... sigma_1"""
    rec = _MoveRecorder(system)
    _rotate_right(rec)
    return rec.finish()


def conjugate_system(system: HurwitzSystem, word: Sequence[int]) -> Tuple[HurwitzSystem, MoveLog]:
    """
    Conjugate every entry by s = t_{w_1} ... t_{w_k}

    Args:
        system: Hurwitz system
        word: 1-based entry indices naming the factors of s

    Returns:
        (HurwitzSystem, MoveLog): (s t_1 s^-1, ..., s t_n s^-1) and its log
    """
    positions = [_check_position(system, w, "entry") for w in word]
    rec = _MoveRecorder(system)
    # conjugating by the current entries in word order composes to s
    for j in positions:
        _conjugate_by_entry(rec, j)
    return rec.finish()


def move_adjacent_inverse_pair(system: HurwitzSystem, frm: int, to: int) -> Tuple[HurwitzSystem, MoveLog]:
    """
    Relocate an adjacent pair (t, t) from positions (frm, frm+1) to (to, to+1)

    Every other entry is left unchanged and keeps its relative order.
    """
    p = _check_pair(system, frm, "pair position")
    q = _check_position(system, to, "target position", len(system) - 1)
    rec = _MoveRecorder(system)
    _move_pair(rec, p, q)
    return rec.finish()


def conjugate_pair(system: HurwitzSystem, pair_at: int, word: Sequence[int]) -> Tuple[HurwitzSystem, MoveLog]:
    """
    Conjugate only the pair at (pair_at, pair_at+1) by h

    Args:
        system: Hurwitz system
        pair_at: 1-based position of the first entry of an equal pair
        word: 1-based indices of entries outside the pair; h is their product

    Returns:
        (HurwitzSystem, MoveLog): The system with (h t h^-1, h t h^-1) in place of the pair
    """
    p = _check_pair(system, pair_at, "pair position")
    positions = [_check_position(system, w, "entry") for w in word]
    if any(q in (p, p + 1) for q in positions):
        raise PreconditionError("the conjugating word may not use the pair itself")
    rec = _MoveRecorder(system)
    _conjugate_pair(rec, p, positions)
    return rec.finish()


def random_walk(
    system: HurwitzSystem,
    steps: int,
    rng: Optional[random.Random] = None,
) -> Tuple[HurwitzSystem, MoveLog]:
    """
    Random braid moves with occasional conjugation by an entry

    Args:
        system: Starting system, at least two entries
        steps: Number of elementary moves or conjugations
        rng: Source of randomness; seeded with 0 when omitted

    Returns:
        (HurwitzSystem, MoveLog): End point of the walk and its log
    """
    rng = rng or random.Random(0)
    rec = _MoveRecorder(system)
    if len(rec) < 2:
        return rec.finish()
    for _ in range(steps):
        if rng.random() < 0.1:
            _conjugate_by_entry(rec, rng.randrange(len(rec)))
        else:
            rec.step(rng.randrange(len(rec) - 1), rng.random() < 0.5)
    return rec.finish()
