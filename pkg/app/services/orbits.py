"""
Enumeration of Hurwitz systems, braid orbits, Nielsen classes and the
irreducibility check over them
"""
import random
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple

import numpy as np

from app.core.config import resolve_cap, settings
from app.core.exceptions import CapExceededError, DomainError, TheoremViolationError
from app.models.hurwitz import BranchingData
from app.models.report import OrbitReport
from app.models.rootsys import RootSystemSpec
from app.services.hurwitz import HurwitzSystem, braid_step, class_multiset, product_matrix, stable_hash
from app.services.nielsen import reduce_indices, subsystem_roots
from app.services.rootsys import RootSystem, build_root_system
from app.services.weyl import WeylElement, generate_subgroup, weyl_group_order
from app.utils.logger import app_logger

Indices = Tuple[int, ...]


def _check_branching(spec: RootSystemSpec, branching: BranchingData) -> None:
    ours = tuple(part.component for part in branching.components)
    if ours != spec.components:
        raise DomainError(f"branching data {branching} does not match root system {spec.label}")


def nonempty_predicate(spec: RootSystemSpec, branching: BranchingData) -> bool:
    """
    Whether generating Hurwitz systems with this branching data exist

    Per component: simply laced needs n even and n >= 2r; otherwise n_s and
    n_l must be even with n_s >= 2 r_s and n_l >= 2 r_l.
    """
    _check_branching(spec, branching)
    for part in branching.components:
        component = part.component
        if component.simply_laced:
            if part.n % 2 or part.n < 2 * component.rank:
                return False
        else:
            r_s, r_l = component.short_long_simple_counts
            if part.n_s % 2 or part.n_l % 2 or part.n_s < 2 * r_s or part.n_l < 2 * r_l:
                return False
    return True


class _Enumerator:
    """Depth-first search over reflection tuples pruned by reachable products"""

    def __init__(self, rs: RootSystem, require_generating: bool, subgroup_cap: Optional[int] = None):
        self.rs = rs
        self.require_generating = require_generating
        self.subgroup_cap = subgroup_cap
        self.class_of = [rs.reflection_class(k) for k in range(len(rs.positive_roots))]
        self.matrices = rs.reflection_matrices
        self.identity = np.eye(rs.rank, dtype=np.int64)
        self._reach: Dict[Tuple[int, ...], Dict[bytes, np.ndarray]] = {}
        self._generating: Dict[FrozenSet[int], bool] = {}
        self.order = weyl_group_order(rs) if require_generating else 0

    def reach(self, budget: Tuple[int, ...]) -> Dict[bytes, np.ndarray]:
        """Products of reflections with these class counts; closed under inverse"""
        if budget not in self._reach:
            c = next((c for c, count in enumerate(budget) if count), None)
            if c is None:
                self._reach[budget] = {self.identity.tobytes(): self.identity}
            else:
                smaller = budget[:c] + (budget[c] - 1,) + budget[c + 1:]
                reached = {}
                for g in self.reach(smaller).values():
                    for k, m in enumerate(self.matrices):
                        if self.class_of[k] == c:
                            h = g @ m
                            reached.setdefault(h.tobytes(), h)
                self._reach[budget] = reached
        return self._reach[budget]

    def generates(self, support: FrozenSet[int]) -> bool:
        if support not in self._generating:
            gens = [WeylElement(self.matrices[k]) for k in sorted(support)]
            self._generating[support] = len(generate_subgroup(gens, self.subgroup_cap)) == self.order
        return self._generating[support]

    def walk(self, budget: Tuple[int, ...], first: Optional[int] = None) -> Iterator[Indices]:
        prefix: List[int] = []

        def descend(product: np.ndarray, remaining: Tuple[int, ...]) -> Iterator[Indices]:
            if not any(remaining):
                if not self.require_generating or self.generates(frozenset(prefix)):
                    yield tuple(prefix)
                return
            choices = range(len(self.matrices)) if first is None or prefix else [first]
            for k in choices:
                c = self.class_of[k]
                if not remaining[c]:
                    continue
                following = remaining[:c] + (remaining[c] - 1,) + remaining[c + 1:]
                step = product @ self.matrices[k]
                if step.tobytes() not in self.reach(following):
                    continue
                prefix.append(k)
                yield from descend(step, following)
                prefix.pop()

        yield from descend(self.identity, budget)


def _enumerate_subtree(
    spec: RootSystemSpec,
    budget: Tuple[int, ...],
    first: int,
    require_generating: bool,
    cap: int,
    subgroup_cap: int,
) -> List[Indices]:
    rs = build_root_system(spec)
    found = []
    for indices in _Enumerator(rs, require_generating, subgroup_cap).walk(budget, first):
        found.append(indices)
        if len(found) > cap:
            raise CapExceededError("ENUMERATION_CAP", cap, "Hurwitz system enumeration")
    return found


def enumerate_systems(
    rs: RootSystem,
    branching: BranchingData,
    require_generating: bool = True,
    cap: Optional[int] = None,
    jobs: Optional[int] = None,
    subgroup_cap: Optional[int] = None,
) -> List[HurwitzSystem]:
    """
    All Hurwitz systems with the given class counts, in lexicographic order
    of positive-root indices

    Args:
        rs: Root system
        branching: Per-component counts
        require_generating: Keep only systems whose entries generate W(rs)
        cap: Maximum number of systems (defaults to settings.ENUMERATION_CAP)
        jobs: Worker processes, split by first entry (defaults to settings.JOBS)
        subgroup_cap: Cap for the generating check closures

    Returns:
        List[HurwitzSystem]: Systems in deterministic order
    """
    _check_branching(rs.spec, branching)
    cap = resolve_cap(cap, "ENUMERATION_CAP")
    subgroup_cap = resolve_cap(subgroup_cap, "SUBGROUP_CAP")
    jobs = jobs or settings.JOBS
    budget = branching.class_budget

    if branching.total == 0:
        return []

    if jobs > 1:
        firsts = range(len(rs.positive_roots))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(
                _enumerate_subtree,
                [rs.spec] * len(firsts),
                [budget] * len(firsts),
                firsts,
                [require_generating] * len(firsts),
                [cap] * len(firsts),
                [subgroup_cap] * len(firsts),
            ))
        found = [indices for chunk in chunks for indices in chunk]
    else:
        found = []
        for indices in _Enumerator(rs, require_generating, subgroup_cap).walk(budget):
            found.append(indices)
            if len(found) > cap:
                break

    if len(found) > cap:
        raise CapExceededError("ENUMERATION_CAP", cap, "Hurwitz system enumeration")
    app_logger.info(f"Enumerated {len(found)} systems for {rs.spec.label} with {branching} (jobs={jobs})")
    return [HurwitzSystem(rs, indices) for indices in found]


class EdgeChecker:
    """
    Sampled check of the braid-move conservation laws

    On a checked edge the product, the multiset of reflection classes and
    the generated reflection subgroup must agree at both ends.
    """

    def __init__(self, rs: RootSystem, rate: Optional[float] = None, seed: Optional[int] = None):
        self.rs = rs
        self.rate = settings.EDGE_CHECK_RATE if rate is None else rate
        self.rng = random.Random(settings.EDGE_CHECK_SEED if seed is None else seed)
        self.checked = 0
        self._subgroups: Dict[FrozenSet[int], FrozenSet] = {}

    def _subgroup(self, indices: Indices) -> FrozenSet:
        support = frozenset(indices)
        if support not in self._subgroups:
            self._subgroups[support] = subsystem_roots(self.rs, reduce_indices(self.rs, sorted(support)).base)
        return self._subgroups[support]

    def __call__(self, before: Indices, after: Indices) -> None:
        if self.rate <= 0 or (self.rate < 1 and self.rng.random() >= self.rate):
            return
        self.checked += 1
        rs = self.rs
        if not np.array_equal(product_matrix(rs, before), product_matrix(rs, after)):
            raise TheoremViolationError("braid move changed the product", details=[before, after])
        if class_multiset(HurwitzSystem(rs, before)) != class_multiset(HurwitzSystem(rs, after)):
            raise TheoremViolationError("braid move changed the reflection classes", details=[before, after])
        if self._subgroup(before) != self._subgroup(after):
            raise TheoremViolationError("braid move changed the generated subgroup", details=[before, after])


def _orbit_indices(
    rs: RootSystem,
    start: Indices,
    cap: int,
    checker: Optional[EdgeChecker] = None,
) -> List[Indices]:
    table = rs.conjugation_table
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for p in range(len(node) - 1):
            for forward in (True, False):
                following = list(node)
                braid_step(table, following, p, forward)
                following = tuple(following)
                if checker is not None:
                    checker(node, following)
                if following not in seen:
                    seen.add(following)
                    if len(seen) > cap:
                        raise CapExceededError("ORBIT_NODE_CAP", cap, "braid orbit")
                    order.append(following)
                    queue.append(following)
    return order


def braid_orbit(
    system: HurwitzSystem,
    cap: Optional[int] = None,
    checker: Optional[EdgeChecker] = None,
) -> Set[HurwitzSystem]:
    """
    Closure of a system under all sigma_i and sigma_i^-1

    Args:
        system: Hurwitz system
        cap: Maximum orbit size (defaults to settings.ORBIT_NODE_CAP)
        checker: Edge sampler; a fresh one from settings when omitted

    Returns:
        Set[HurwitzSystem]: The braid orbit
    """
    cap = resolve_cap(cap, "ORBIT_NODE_CAP")
    checker = checker or EdgeChecker(system.rs)
    members = _orbit_indices(system.rs, system.indices, cap, checker)
    app_logger.debug(f"Braid orbit of {system.hash}: {len(members)} systems, {checker.checked} edges checked")
    return {HurwitzSystem(system.rs, indices) for indices in members}


def orbit_partition(
    systems: List[HurwitzSystem],
    cap: Optional[int] = None,
    checker: Optional[EdgeChecker] = None,
) -> List[List[HurwitzSystem]]:
    """
    Split systems into braid orbits

    Orbits are listed by their first member in input order, members in input
    order. Every orbit must lie inside the input.
    """
    if not systems:
        return []
    rs = systems[0].rs
    cap = resolve_cap(cap, "ORBIT_NODE_CAP")
    checker = checker or EdgeChecker(rs)
    position = {s.indices: q for q, s in enumerate(systems)}
    assigned: Set[Indices] = set()
    orbits = []
    for system in systems:
        if system.indices in assigned:
            continue
        members = _orbit_indices(rs, system.indices, cap, checker)
        outside = [m for m in members if m not in position]
        if outside:
            raise TheoremViolationError(
                "braid orbit leaves the enumerated set",
                details=[list(rs.positive_roots[k]) for k in outside[0]],
            )
        assigned.update(members)
        orbits.append([systems[q] for q in sorted(position[m] for m in members)])
    return orbits


@dataclass
class NielsenClass:
    """Systems modulo simultaneous conjugation; representative has the least hash"""
    representative: HurwitzSystem
    members: List[HurwitzSystem] = field(default_factory=list)


def _conjugation_orbit(rs: RootSystem, start: Indices, cap: int) -> List[Indices]:
    table = rs.conjugation_table
    simple = [rs.index_of(alpha) for alpha in rs.simple_roots]
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        node = queue.popleft()
        for s in simple:
            image = tuple(table[s][k] for k in node)
            if image not in seen:
                seen.add(image)
                if len(seen) > cap:
                    raise CapExceededError("SUBGROUP_CAP", cap, "conjugation orbit")
                order.append(image)
                queue.append(image)
    return order


def _nielsen_classes(
    rs: RootSystem,
    systems: List[HurwitzSystem],
    cap: int,
) -> Tuple[List[NielsenClass], Dict[Indices, int]]:
    class_of: Dict[Indices, int] = {}
    classes: List[NielsenClass] = []
    for system in systems:
        if system.indices not in class_of:
            conjugates = _conjugation_orbit(rs, system.indices, cap)
            representative = min((HurwitzSystem(rs, c) for c in conjugates), key=stable_hash)
            for c in conjugates:
                class_of[c] = len(classes)
            classes.append(NielsenClass(representative=representative))
        classes[class_of[system.indices]].members.append(system)
    return classes, class_of


def nielsen_quotient(systems: List[HurwitzSystem], cap: Optional[int] = None) -> List[NielsenClass]:
    """
    Partition systems under simultaneous W-conjugation

    Args:
        systems: Systems over one root system
        cap: Maximum conjugation orbit size (defaults to settings.SUBGROUP_CAP)

    Returns:
        List[NielsenClass]: Classes sorted by representative hash, members in
        input order
    """
    if not systems:
        return []
    cap = resolve_cap(cap, "SUBGROUP_CAP")
    classes, _ = _nielsen_classes(systems[0].rs, systems, cap)
    return sorted(classes, key=lambda nc: stable_hash(nc.representative))


def count_braid_orbits_on_nielsen_classes(
    systems: List[HurwitzSystem],
    cap: Optional[int] = None,
) -> int:
    """
    Number of braid orbits on the Nielsen classes of the input

    Braid moves commute with conjugation, so moving any member of a class
    lands in a well-defined class. Classes reached outside the input are
    added as they are found.
    """
    if not systems:
        return 0
    rs = systems[0].rs
    cap = resolve_cap(cap, "SUBGROUP_CAP")
    table = rs.conjugation_table
    classes, class_of = _nielsen_classes(rs, systems, cap)

    parent = list(range(len(classes)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    queue = deque(range(len(classes)))
    while queue:
        c = queue.popleft()
        node = classes[c].representative.indices
        for p in range(len(node) - 1):
            for forward in (True, False):
                following = list(node)
                braid_step(table, following, p, forward)
                following = tuple(following)
                if following not in class_of:
                    conjugates = _conjugation_orbit(rs, following, cap)
                    representative = min((HurwitzSystem(rs, x) for x in conjugates), key=stable_hash)
                    for x in conjugates:
                        class_of[x] = len(classes)
                    classes.append(NielsenClass(representative=representative))
                    parent.append(len(parent))
                    queue.append(len(classes) - 1)
                a, b = find(c), find(class_of[following])
                if a != b:
                    parent[max(a, b)] = min(a, b)

    roots = {find(class_of[s.indices]) for s in systems}
    return len(roots)


def verify_irreducibility(
    spec: RootSystemSpec,
    branching: BranchingData,
    enumeration_cap: Optional[int] = None,
    orbit_cap: Optional[int] = None,
    subgroup_cap: Optional[int] = None,
    jobs: Optional[int] = None,
) -> OrbitReport:
    """
    Enumerate generating systems, split them into braid orbits and check
    that there is exactly one orbit when the systems exist

    Args:
        spec: Root system spec
        branching: Branching data matching spec
        enumeration_cap: Cap on enumerated systems
        orbit_cap: Cap on braid orbit size
        subgroup_cap: Cap on subgroup and conjugation closures
        jobs: Parallelism degree for enumeration

    Returns:
        OrbitReport: Counts; identical across runs and job counts

    Raises:
        TheoremViolationError: More than one orbit, a nonempty prediction
            contradicted by enumeration, or differing orbit counts on systems
            and Nielsen classes
    """
    started = time.perf_counter()
    caps = {
        "ENUMERATION_CAP": resolve_cap(enumeration_cap, "ENUMERATION_CAP"),
        "ORBIT_NODE_CAP": resolve_cap(orbit_cap, "ORBIT_NODE_CAP"),
        "SUBGROUP_CAP": resolve_cap(subgroup_cap, "SUBGROUP_CAP"),
    }
    rs = build_root_system(spec)
    predicted = nonempty_predicate(spec, branching)

    systems = enumerate_systems(
        rs, branching, True, caps["ENUMERATION_CAP"], jobs, caps["SUBGROUP_CAP"]
    )
    checker = EdgeChecker(rs)
    orbits = orbit_partition(systems, caps["ORBIT_NODE_CAP"], checker)
    sizes = [len(orbit) for orbit in orbits]
    classes = nielsen_quotient(systems, caps["SUBGROUP_CAP"])
    class_orbits = count_braid_orbits_on_nielsen_classes(systems, caps["SUBGROUP_CAP"])

    if sum(sizes) != len(systems):
        raise TheoremViolationError("braid orbits do not partition the enumerated systems")
    if predicted != bool(systems):
        raise TheoremViolationError(
            f"nonempty prediction {predicted} contradicts enumeration of {len(systems)} systems"
        )
    if len(orbits) > 1:
        raise TheoremViolationError(f"{len(orbits)} braid orbits for {spec.label} with {branching}", details=sizes)
    if class_orbits != len(orbits):
        raise TheoremViolationError(
            f"{class_orbits} braid orbits on Nielsen classes but {len(orbits)} on systems"
        )

    app_logger.info(
        f"{spec.label} {branching}: {len(systems)} systems, {len(orbits)} orbits, "
        f"{len(classes)} Nielsen classes, {checker.checked} edges checked"
    )
    return OrbitReport(
        tool=settings.APP_NAME,
        version=settings.APP_VERSION,
        spec=spec.label,
        branching=str(branching),
        branching_data=branching,
        total_systems=len(systems),
        orbit_count=len(orbits),
        orbit_sizes=sizes,
        nielsen_class_count=len(classes),
        nielsen_orbit_count=class_orbits,
        nonempty_predicted=predicted,
        caps=caps,
        elapsed_seconds=round(time.perf_counter() - started, 3) if settings.REPORT_TIMINGS else None,
    )
