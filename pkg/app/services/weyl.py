"""
Weyl group elements as exact integer matrices on simple-root coordinates
"""
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from app.core.config import resolve_cap
from app.core.exceptions import CapExceededError, DimensionMismatchError, DomainError
from app.services.rootsys import RootSystem, RootVector, check_root
from app.utils.logger import app_logger


class WeylElement:
    """
    Immutable Weyl group element

    Column j of ``matrix`` is the image of alpha_j. Equality and hashing use
    the row-major bytes of the matrix.
    """

    __slots__ = ("matrix", "key")

    def __init__(self, matrix: np.ndarray):
        matrix = np.ascontiguousarray(matrix, dtype=np.int64)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {matrix.shape}")
        matrix.setflags(write=False)
        self.matrix = matrix
        self.key = matrix.tobytes()

    @property
    def rank(self) -> int:
        return self.matrix.shape[0]

    def apply(self, x: Sequence[int]) -> RootVector:
        return tuple(int(v) for v in self.matrix @ np.asarray(x, dtype=np.int64))

    def tolist(self) -> List[List[int]]:
        """JSON form: the integer matrix, row by row"""
        return self.matrix.tolist()

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeylElement) and self.rank == other.rank and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"WeylElement({self.matrix.tolist()})"

    def __reduce__(self):
        return (WeylElement, (np.array(self.matrix),))


@dataclass(frozen=True)
class Reflection:
    """A reflection s_beta with its positive axis"""
    element: WeylElement
    axis: RootVector


def reflection_element(rs: RootSystem, beta: Sequence[int]) -> Reflection:
    """
    Matrix of s_beta

    Args:
        rs: Root system
        beta: Any root; s_beta = s_{-beta}

    Returns:
        Reflection: Element with column j = s_beta(alpha_j) and positive axis
    """
    k = rs.index_of(check_root(rs, beta))
    return Reflection(element=WeylElement(rs.reflection_matrices[k]), axis=rs.positive_roots[k])


def reflection_by_index(rs: RootSystem, k: int) -> Reflection:
    return Reflection(element=WeylElement(rs.reflection_matrices[k]), axis=rs.positive_roots[k])


def identity(rs: RootSystem) -> WeylElement:
    return WeylElement(np.eye(rs.rank, dtype=np.int64))


def _same_rank(a: WeylElement, b: WeylElement) -> None:
    if a.rank != b.rank:
        raise DimensionMismatchError(f"rank mismatch: {a.rank} vs {b.rank}")


def multiply(a: WeylElement, b: WeylElement) -> WeylElement:
    """a*b, acting as x -> a(b(x))"""
    _same_rank(a, b)
    return WeylElement(a.matrix @ b.matrix)


def inverse(a: WeylElement) -> WeylElement:
    candidate = np.rint(np.linalg.inv(a.matrix)).astype(np.int64)
    if not np.array_equal(a.matrix @ candidate, np.eye(a.rank, dtype=np.int64)):
        raise DomainError(f"{a!r} has no integral inverse")
    return WeylElement(candidate)


def is_reflection(rs: RootSystem, g: WeylElement) -> Optional[RootVector]:
    """Axis of g when g is a reflection, else None"""
    if g.rank != rs.rank:
        raise DimensionMismatchError(f"rank mismatch: {g.rank} vs {rs.rank}")
    k = rs.reflection_lookup.get(g.key)
    return None if k is None else rs.positive_roots[k]


def sign(g: WeylElement) -> int:
    """epsilon(g) = det(g)"""
    return 1 if round(np.linalg.det(g.matrix)) > 0 else -1


def order(g: WeylElement) -> int:
    one = np.eye(g.rank, dtype=np.int64)
    power, k = g.matrix, 1
    while not np.array_equal(power, one):
        power = power @ g.matrix
        k += 1
    return k


def generate_subgroup(
    gens: Sequence[WeylElement],
    cap: Optional[int] = None,
    rs: Optional[RootSystem] = None,
) -> Set[WeylElement]:
    """
    Closure of a generating set under multiplication

    Args:
        gens: Generators, all of the same rank
        cap: Maximum subgroup size (defaults to settings.SUBGROUP_CAP)
        rs: Root system, needed only for the identity when gens is empty

    Returns:
        Set[WeylElement]: The whole subgroup

    Raises:
        CapExceededError: If the subgroup is larger than cap
    """
    cap = resolve_cap(cap, "SUBGROUP_CAP")
    gens = list(gens)
    if not gens and rs is None:
        raise DomainError("an empty generating set needs a root system")
    rank = gens[0].rank if gens else rs.rank
    for g in gens:
        if g.rank != rank:
            raise DimensionMismatchError(f"rank mismatch: {g.rank} vs {rank}")

    start = WeylElement(np.eye(rank, dtype=np.int64))
    found: Dict[bytes, WeylElement] = {start.key: start}
    queue = deque([start])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = WeylElement(g.matrix @ s.matrix)
            if h.key not in found:
                found[h.key] = h
                if len(found) > cap:
                    raise CapExceededError("SUBGROUP_CAP", cap, "subgroup closure")
                queue.append(h)

    app_logger.debug(f"Subgroup closure: {len(gens)} generators, {len(found)} elements")
    return set(found.values())


@lru_cache(maxsize=None)
def weyl_group_order(rs: RootSystem) -> int:
    """|W(rs)|, by closure of the simple reflections"""
    simple = [reflection_element(rs, alpha).element for alpha in rs.simple_roots]
    size = len(generate_subgroup(simple, rs=rs))
    app_logger.info(f"|W({rs.spec.label})| = {size}")
    return size


def reflection_orbits(rs: RootSystem) -> List[Tuple[RootVector, ...]]:
    """
    W-orbits of the positive axes

    Args:
        rs: Root system

    Returns:
        List of orbits, each sorted, ordered by their least member
    """
    simple = rs.simple_roots
    unseen = set(rs.positive_roots)
    orbits = []
    while unseen:
        start = min(unseen)
        orbit = {start}
        queue = deque([start])
        while queue:
            beta = queue.popleft()
            for alpha in simple:
                image = rs.positive_of(rs.reflect_vector(alpha, beta))
                if image not in orbit:
                    orbit.add(image)
                    queue.append(image)
        unseen -= orbit
        orbits.append(tuple(sorted(orbit)))
    return sorted(orbits)
