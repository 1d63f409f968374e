"""
Reduction of Hurwitz systems to the normal form

    (s_a1, s_a1, ..., s_ar, s_ar, s_alpha, ..., s_alpha, s_beta, ..., s_beta)

per component, in canonical component order. alpha is a fixed short root
and beta a fixed long root of the component (defaults: the lexicographically
least positive root of each length class).
"""
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from app.core.config import resolve_cap
from app.core.exceptions import (
    CapExceededError,
    NotGeneratingError,
    PreconditionError,
    TheoremViolationError,
)
from app.models.hurwitz import BranchingData, MoveLog
from app.services.hurwitz import (
    HurwitzSystem,
    _conjugate_pair,
    _move_pair,
    _MoveRecorder,
    braid_step,
    branching_signature,
)
from app.services.nielsen import reduce_indices
from app.services.rootsys import (
    LONG,
    SHORT,
    RootSystem,
    RootVector,
    canonical_anchor,
    check_root,
    classify_base,
)
from app.utils.logger import app_logger

Anchors = Dict[Tuple[int, str], RootVector]


def _split(rec: _MoveRecorder) -> None:
    components = rec.source.rs.root_components
    for q in range(1, len(rec)):
        p = q
        # entries of different components commute, so sigma is a pure swap
        while p > 0 and components[rec.indices[p - 1]] > components[rec.indices[p]]:
            rec.step(p - 1, True)
            p -= 1


def split_components(system: HurwitzSystem) -> Tuple[HurwitzSystem, MoveLog]:
    """
    Group entries by component in canonical order, keeping relative order

    Returns:
        (HurwitzSystem, MoveLog): Concatenation T^(1) ... T^(k) and its log
    """
    rec = _MoveRecorder(system)
    _split(rec)
    return rec.finish()


def _first_adjacent_pair(node: Tuple[int, ...]) -> Optional[int]:
    for q in range(len(node) - 1):
        if node[q] == node[q + 1]:
            return q
    return None


def _search_adjacent_pair(
    table: List[List[int]],
    start: Tuple[int, ...],
    cap: int,
) -> Tuple[List[Tuple[int, bool]], int]:
    """
    BFS over the braid orbit of a window for a system with two equal
    adjacent entries

    Returns:
        (moves, q): 0-based moves reaching it and the position of the pair
    """
    q = _first_adjacent_pair(start)
    if q is not None:
        return [], q

    parent: Dict[Tuple[int, ...], Optional[Tuple[Tuple[int, ...], int, bool]]] = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for p in range(len(node) - 1):
            for forward in (True, False):
                following = list(node)
                braid_step(table, following, p, forward)
                following = tuple(following)
                if following in parent:
                    continue
                parent[following] = (node, p, forward)
                if len(parent) > cap:
                    raise CapExceededError("ORBIT_NODE_CAP", cap, "pair-up search")

                q = _first_adjacent_pair(following)
                if q is not None:
                    moves = []
                    cursor = following
                    while parent[cursor] is not None:
                        previous, step, direction = parent[cursor]
                        moves.append((step, direction))
                        cursor = previous
                    app_logger.debug(f"Adjacent pair found after {len(parent)} nodes")
                    return moves[::-1], q
                queue.append(following)

    raise TheoremViolationError("braid orbit contains no system with an adjacent equal pair", details=list(start))


def _pair_window(rec: _MoveRecorder, start: int, end: int, cap: int) -> None:
    while end - start >= 2:
        moves, q = _search_adjacent_pair(rec.table, tuple(rec.indices[start:end]), cap)
        for p, forward in moves:
            rec.step(start + p, forward)
        _move_pair(rec, start + q, start)
        start += 2


def pair_up(system: HurwitzSystem, cap: Optional[int] = None) -> Tuple[HurwitzSystem, MoveLog]:
    """
    Braid a system into the form t_1 = t_2, t_3 = t_4, ...

    Args:
        system: Hurwitz system
        cap: BFS node cap per search (defaults to settings.ORBIT_NODE_CAP)

    Returns:
        (HurwitzSystem, MoveLog): Paired system and its log
    """
    cap = resolve_cap(cap, "ORBIT_NODE_CAP")
    rec = _MoveRecorder(system)
    _pair_window(rec, 0, len(rec), cap)
    return rec.finish()


def resolve_anchors(rs: RootSystem, anchors: Optional[Sequence[Sequence[int]]] = None) -> Anchors:
    """
    Anchor root per (component, length class)

    Args:
        rs: Root system
        anchors: Roots overriding the canonical choice of their own class

    Returns:
        Dict mapping (component, "short" | "long") to a positive root
    """
    resolved: Anchors = {}
    for c, component in enumerate(rs.spec.components):
        classes = [SHORT] if component.simply_laced else [SHORT, LONG]
        for length in classes:
            resolved[(c, length)] = canonical_anchor(rs, c, length)

    overridden = set()
    for root in anchors or []:
        k = rs.index_of(check_root(rs, root))
        slot = (rs.root_components[k], rs.length_classes[k])
        if slot in overridden:
            raise PreconditionError(f"two anchors given for {rs.spec.components[slot[0]].label} {slot[1]} roots")
        overridden.add(slot)
        resolved[slot] = rs.positive_roots[k]
    return resolved


def normal_form_pattern(rs: RootSystem, branching: BranchingData, anchors: Optional[Anchors] = None) -> List[RootVector]:
    """Axes of the normal form for given branching data"""
    anchors = anchors or resolve_anchors(rs)
    axes: List[RootVector] = []
    for c, part in enumerate(branching.components):
        simple = [rs.simple_roots[i] for i in rs.component_range(c)]
        for alpha in simple:
            axes += [alpha, alpha]
        r_s, r_l = part.component.short_long_simple_counts
        counts = part.counts
        axes += [anchors[(c, SHORT)]] * (counts[0] - 2 * r_s)
        if len(counts) > 1:
            axes += [anchors[(c, LONG)]] * (counts[1] - 2 * r_l)
    return axes


def _conjugating_word(rs: RootSystem, c: int, axis: RootVector, anchor: RootVector) -> List[int]:
    """Simple indices [w_1, ..., w_k] with s_w1 ... s_wk (axis) = +-anchor"""
    parent: Dict[RootVector, Optional[Tuple[RootVector, int]]] = {axis: None}
    queue = deque([axis])
    while queue:
        beta = queue.popleft()
        if beta == anchor:
            path = []
            while parent[beta] is not None:
                beta, i = parent[beta]
                path.append(i)
            return path
        for i in rs.component_range(c):
            image = rs.positive_of(rs.reflect_vector(rs.simple_roots[i], beta))
            if image not in parent:
                parent[image] = (beta, i)
                queue.append(image)
    raise PreconditionError(f"{list(anchor)} is not W-conjugate to {list(axis)}")


def normal_form(
    system: HurwitzSystem,
    anchors: Optional[Sequence[Sequence[int]]] = None,
    cap: Optional[int] = None,
) -> Tuple[HurwitzSystem, MoveLog]:
    """
    Braid a generating system into the normal form

    Args:
        system: Hurwitz system whose entries generate W(rs)
        anchors: Optional roots replacing the canonical alpha / beta
        cap: BFS node cap for pair-up (defaults to settings.ORBIT_NODE_CAP)

    Returns:
        (HurwitzSystem, MoveLog): Normal form and the log reaching it

    Raises:
        NotGeneratingError: Entries generate a proper reflection subgroup
    """
    rs = system.rs
    cap = resolve_cap(cap, "ORBIT_NODE_CAP")
    resolved = resolve_anchors(rs, anchors)

    base = reduce_indices(rs, system.indices).base
    if set(base) != set(rs.simple_roots):
        subsystem = classify_base(rs, base).label
        raise NotGeneratingError(
            f"entries generate the proper reflection subgroup of type {subsystem}",
            base=base,
            subsystem=subsystem,
        )

    rec = _MoveRecorder(system)
    _split(rec)

    start = 0
    for c, component in enumerate(rs.spec.components):
        end = start + sum(1 for k in rec.indices if rs.root_components[k] == c)
        _pair_window(rec, start, end, cap)
        pairs = (end - start) // 2

        # lift the Nielsen reduction of the half-system to pair conjugations
        reduction = reduce_indices(rs, [rec.indices[start + 2 * p] for p in range(pairs)])
        for i, j in reduction.trace:
            _conjugate_pair(rec, start + 2 * j, [start + 2 * i])

        first = rs.offsets[c]
        r = component.rank
        for slot in range(r):
            target = rs.index_of(rs.simple_roots[first + slot])
            found = next((p for p in range(slot, pairs) if rec.indices[start + 2 * p] == target), None)
            if found is None:
                raise TheoremViolationError(
                    f"reduced half-system of {component.label} lacks simple root {slot + 1}",
                    details=[list(rs.positive_roots[k]) for k in rec.indices[start:end]],
                )
            _move_pair(rec, start + 2 * found, start + 2 * slot)

        # the first 2r entries now generate W of the component
        for p in range(r, pairs):
            k = rec.indices[start + 2 * p]
            anchor = resolved[(c, rs.length_classes[k])]
            word = _conjugating_word(rs, c, rs.positive_roots[k], anchor)
            _conjugate_pair(rec, start + 2 * p, [start + 2 * (i - first) for i in word])

        # short extra pairs before long ones
        target = r
        for p in range(r, pairs):
            if rs.length_classes[rec.indices[start + 2 * p]] == SHORT:
                _move_pair(rec, start + 2 * p, start + 2 * target)
                target += 1

        start = end

    result, log = rec.finish()
    expected = normal_form_pattern(rs, branching_signature(system), resolved)
    if list(result.axes) != expected:
        raise TheoremViolationError("normal form does not match the expected pattern", details=[list(a) for a in result.axes])
    app_logger.info(f"Normal form of {len(system)} entries over {rs.spec.label} reached in {len(log)} moves")
    return result, log
