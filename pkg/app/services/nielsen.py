"""
Nielsen transformations on multisets of reflections and the height-decreasing
reduction to a base of the generated sub-root-system
"""
from collections import deque
from dataclasses import dataclass, field
from typing import FrozenSet, List, Optional, Sequence, Tuple

from app.core.exceptions import MoveIndexError, PreconditionError, TheoremViolationError
from app.models.report import NielsenResult
from app.services.rootsys import RootSystem, RootVector, classify_base, check_root
from app.services.weyl import Reflection, reflection_by_index
from app.utils.logger import app_logger


@dataclass
class NielsenReduction:
    """Outcome of nielsen_reduce; positions are preserved from the input"""
    reflections: List[Reflection]
    trace: List[Tuple[int, int]] = field(default_factory=list)
    heights: List[int] = field(default_factory=list)
    collisions: List[int] = field(default_factory=list)

    @property
    def axes(self) -> List[RootVector]:
        return [t.axis for t in self.reflections]

    @property
    def base(self) -> List[RootVector]:
        return sorted(set(self.axes))


def _as_indices(rs: RootSystem, reflections: Sequence) -> List[int]:
    return [rs.index_of(check_root(rs, getattr(t, "axis", t))) for t in reflections]


def _height(rs: RootSystem, indices: Sequence[int]) -> int:
    return sum(sum(rs.positive_roots[k]) for k in indices)


def nielsen_transform(
    rs: RootSystem,
    reflections: Sequence,
    i: int,
    j: int,
) -> Tuple[List[Reflection], bool]:
    """
    Replace t_j by t_i t_j t_i^-1

    Args:
        rs: Root system
        reflections: Reflections or axes, in order
        i: 1-based index of the conjugating entry
        j: 1-based index of the replaced entry

    Returns:
        (List[Reflection], bool): New reflections and whether t_j now repeats
        another entry
    """
    indices = _as_indices(rs, reflections)
    for index in (i, j):
        if not 1 <= index <= len(indices):
            raise MoveIndexError(f"Nielsen index {index} out of range 1..{len(indices)}")
    if i == j:
        raise PreconditionError("a Nielsen transformation needs two distinct indices")
    new = rs.conjugation_table[indices[i - 1]][indices[j - 1]]
    collision = any(k == new for q, k in enumerate(indices) if q != j - 1)
    indices[j - 1] = new
    return [reflection_by_index(rs, k) for k in indices], collision


def _choose_step(rs: RootSystem, indices: List[int]) -> Optional[Tuple[int, int]]:
    """First pair of distinct axes with positive product, oriented to lower the height"""
    roots = rs.positive_roots
    table = rs.conjugation_table
    for a in range(len(indices)):
        for b in range(a + 1, len(indices)):
            ka, kb = indices[a], indices[b]
            if ka == kb or rs.inner(roots[ka], roots[kb]) <= 0:
                continue

            # alpha is the shorter root
            alpha, beta = (a, b) if rs.norms[ka] <= rs.norms[kb] else (b, a)
            ra, rb = roots[indices[alpha]], roots[indices[beta]]
            if min(rs.reflect_vector(ra, rb)) >= 0:
                candidates = [(alpha, beta), (beta, alpha)]
            elif min(rs.reflect_vector(rb, ra)) >= 0:
                candidates = [(beta, alpha), (alpha, beta)]
            else:
                candidates = [(alpha, beta), (beta, alpha)]

            for i, j in candidates:
                if sum(roots[table[indices[i]][indices[j]]]) < sum(roots[indices[j]]):
                    return i, j
            raise TheoremViolationError(
                "no Nielsen transformation lowers the height",
                details={"axes": [list(roots[ka]), list(roots[kb])]},
            )
    return None


def reduce_indices(rs: RootSystem, indices: Sequence[int]) -> NielsenReduction:
    """nielsen_reduce on positive-root indices; trace positions are 0-based"""
    indices = list(indices)
    table = rs.conjugation_table
    reduction = NielsenReduction(reflections=[], heights=[_height(rs, indices)])

    while True:
        step = _choose_step(rs, indices)
        if step is None:
            break
        i, j = step
        new = table[indices[i]][indices[j]]
        if any(k == new for q, k in enumerate(indices) if q != j):
            reduction.collisions.append(len(reduction.trace) + 1)
        indices[j] = new
        reduction.trace.append((i, j))
        reduction.heights.append(_height(rs, indices))
        if reduction.heights[-1] >= reduction.heights[-2]:
            raise TheoremViolationError("set height did not decrease", details=reduction.heights)

    reduction.reflections = [reflection_by_index(rs, k) for k in indices]
    return reduction


def nielsen_reduce(rs: RootSystem, reflections: Sequence) -> NielsenReduction:
    """
    Reduce a multiset of reflections by Nielsen transformations until the
    distinct axes have pairwise non-positive inner products

    Args:
        rs: Root system
        reflections: Non-empty sequence of reflections or axes

    Returns:
        NielsenReduction: Final reflections, 1-based (i, j) trace, the set
        height before each step and at the end, and the trace steps that
        produced a repeated axis
    """
    if not reflections:
        raise PreconditionError("nielsen_reduce needs at least one reflection")
    reduction = reduce_indices(rs, _as_indices(rs, reflections))
    reduction.trace = [(i + 1, j + 1) for i, j in reduction.trace]
    app_logger.debug(
        f"Nielsen reduction in {len(reduction.trace)} steps, "
        f"h {reduction.heights[0]} -> {reduction.heights[-1]}, {len(reduction.collisions)} collisions"
    )
    return reduction


def subsystem_base(rs: RootSystem, reflections: Sequence) -> List[RootVector]:
    """Base of the root system of the reflection subgroup generated by the input"""
    if not reflections:
        return []
    return reduce_indices(rs, _as_indices(rs, reflections)).base


def generates_weyl_group(rs: RootSystem, reflections: Sequence) -> bool:
    return set(subsystem_base(rs, reflections)) == set(rs.simple_roots)


def subsystem_roots(rs: RootSystem, base: Sequence[RootVector]) -> FrozenSet[RootVector]:
    """
    Positive roots of the sub-root-system spanned by a base

    Two bases span the same sub-root-system iff these sets agree.
    """
    found = set(base)
    queue = deque(base)
    while queue:
        beta = queue.popleft()
        for alpha in base:
            image = rs.positive_of(rs.reflect_vector(alpha, beta))
            if image not in found:
                found.add(image)
                queue.append(image)
    return frozenset(found)


def to_result(rs: RootSystem, reduction: NielsenReduction) -> NielsenResult:
    base = reduction.base
    return NielsenResult(
        rootsystem=rs.spec.label,
        axes=[list(axis) for axis in reduction.axes],
        trace=[list(step) for step in reduction.trace],
        heights=reduction.heights,
        collisions=reduction.collisions,
        base=[list(axis) for axis in base],
        subsystem=classify_base(rs, base).label,
    )
