"""
Exact construction and arithmetic of root systems

Roots are integer tuples over the concatenated simple roots of all
components. Node numbering follows Bourbaki:

    A_r  1-2-...-r
    B_r  1-...-(r-1)=>r        alpha_r short
    C_r  1-...-(r-1)<=r        alpha_r long
    D_r  1-...-(r-2) with r-1 and r both attached to r-2
    E_r  1-3-4-5-...-r with 2 attached to 4
    F_4  1-2=>3-4              alpha_1, alpha_2 long
    G_2  1<=2 (triple)         alpha_1 short

The inner product is normalized so short roots have (a|a)=2 and long roots
have 4 (B, C, F) or 6 (G).
"""
from collections import deque
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.exceptions import DimensionMismatchError, DomainError, NotARootError
from app.models.rootsys import Component, ComponentPayload, RootSystemPayload, RootSystemSpec
from app.utils.logger import app_logger

RootVector = Tuple[int, ...]

SHORT = "short"
LONG = "long"


def _component_gram(component: Component) -> np.ndarray:
    """Gram matrix (alpha_i|alpha_j) of one irreducible component"""
    r, family = component.rank, component.family
    lengths = [2] * r
    edges: List[Tuple[int, int, int]] = []

    if family == "A":
        edges = [(i, i + 1, -1) for i in range(r - 1)]
    elif family == "B":
        lengths = [4] * (r - 1) + [2]
        edges = [(i, i + 1, -2) for i in range(r - 1)]
    elif family == "C":
        lengths = [2] * (r - 1) + [4]
        edges = [(i, i + 1, -1) for i in range(r - 2)] + [(r - 2, r - 1, -2)]
    elif family == "D":
        edges = [(i, i + 1, -1) for i in range(r - 2)] + [(r - 3, r - 1, -1)]
    elif family == "E":
        edges = [(0, 2, -1), (2, 3, -1), (1, 3, -1)] + [(i, i + 1, -1) for i in range(3, r - 1)]
    elif family == "F":
        lengths = [4, 4, 2, 2]
        edges = [(0, 1, -2), (1, 2, -2), (2, 3, -1)]
    elif family == "G":
        lengths = [2, 6]
        edges = [(0, 1, -3)]

    gram = np.diag(np.array(lengths, dtype=np.int64))
    for i, j, value in edges:
        gram[i, j] = gram[j, i] = value
    return gram


class RootSystem:
    """
    Immutable root system with Cartan data, positive roots, length classes
    and the dominant short root of every component.

    Use build_root_system() rather than the constructor so that equal specs
    share one instance and its lazily built tables.
    """

    def __init__(self, spec: RootSystemSpec):
        self.spec = spec
        self.rank = spec.rank

        blocks = [_component_gram(c) for c in spec.components]
        gram = np.zeros((self.rank, self.rank), dtype=np.int64)
        offsets = []
        start = 0
        for block in blocks:
            size = block.shape[0]
            gram[start:start + size, start:start + size] = block
            offsets.append(start)
            start += size
        self.offsets: Tuple[int, ...] = tuple(offsets)

        diagonal = np.diag(gram)
        cartan = (2 * gram) // diagonal[np.newaxis, :]
        gram.setflags(write=False)
        cartan.setflags(write=False)
        self.gram = gram
        self.cartan = cartan
        self._gram_rows = [[int(v) for v in row] for row in gram]
        self._norms = [int(v) for v in diagonal]

        self.simple_roots: Tuple[RootVector, ...] = tuple(
            tuple(1 if k == i else 0 for k in range(self.rank)) for i in range(self.rank)
        )

        positive = sorted(
            (root for root in self._close_under_simple_reflections() if min(root) >= 0),
            key=lambda root: (sum(root), root),
        )
        self.positive_roots: Tuple[RootVector, ...] = tuple(positive)
        self.roots: Tuple[RootVector, ...] = self.positive_roots + tuple(
            tuple(-c for c in root) for root in self.positive_roots
        )
        self._positive_index: Dict[RootVector, int] = {root: k for k, root in enumerate(self.positive_roots)}
        self._root_set = frozenset(self.roots)

        self.norms: Tuple[int, ...] = tuple(self.inner(root, root) for root in self.positive_roots)
        self.root_components: Tuple[int, ...] = tuple(self.component_of(root) for root in self.positive_roots)
        self.length_classes: Tuple[str, ...] = tuple(
            SHORT if norm == 2 else LONG for norm in self.norms
        )
        self.dominant_short: Tuple[RootVector, ...] = tuple(
            max(
                (root for k, root in enumerate(self.positive_roots)
                 if self.root_components[k] == c and self.length_classes[k] == SHORT),
                key=lambda root: (sum(root), root),
            )
            for c in range(len(spec.components))
        )

        app_logger.debug(f"Built root system {spec.label}: {len(self.roots)} roots")

    def __repr__(self) -> str:
        return f"RootSystem({self.spec.label})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootSystem) and other.spec == self.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __reduce__(self):
        return (build_root_system, (self.spec,))

    def _close_under_simple_reflections(self) -> set:
        seeds = list(self.simple_roots) + [tuple(-c for c in root) for root in self.simple_roots]
        seen = set(seeds)
        queue = deque(seeds)
        while queue:
            x = queue.popleft()
            for i in range(self.rank):
                image = self._reflect_simple(i, x)
                if image not in seen:
                    seen.add(image)
                    queue.append(image)
        return seen

    def _reflect_simple(self, i: int, x: RootVector) -> RootVector:
        n = 2 * sum(x[k] * self._gram_rows[k][i] for k in range(self.rank)) // self._norms[i]
        return tuple(c - n if k == i else c for k, c in enumerate(x))

    # Integer arithmetic without validation, used by the hot paths

    def inner(self, x: Sequence[int], y: Sequence[int]) -> int:
        rows = self._gram_rows
        total = 0
        for i, xi in enumerate(x):
            if xi:
                row = rows[i]
                total += xi * sum(row[j] * yj for j, yj in enumerate(y) if yj)
        return total

    def reflect_vector(self, alpha: RootVector, x: Sequence[int]) -> RootVector:
        n = 2 * self.inner(x, alpha) // self.inner(alpha, alpha)
        return tuple(c - n * a for c, a in zip(x, alpha))

    def positive_of(self, root: Sequence[int]) -> RootVector:
        root = tuple(root)
        if root in self._positive_index:
            return root
        return tuple(-c for c in root)

    # Lookups

    def is_root(self, x: Sequence[int]) -> bool:
        return tuple(x) in self._root_set

    def is_positive_root(self, x: Sequence[int]) -> bool:
        return tuple(x) in self._positive_index

    def index_of(self, root: Sequence[int]) -> int:
        """Index of the positive representative of a root"""
        root = tuple(root)
        if root not in self._root_set:
            raise NotARootError(f"{list(root)} is not a root of {self.spec.label}")
        return self._positive_index[self.positive_of(root)]

    def component_of(self, root: Sequence[int]) -> int:
        for c, start in enumerate(self.offsets):
            end = start + self.spec.components[c].rank
            if any(root[start:end]):
                return c
        raise DomainError("zero vector has no component")

    def component_range(self, c: int) -> range:
        start = self.offsets[c]
        return range(start, start + self.spec.components[c].rank)

    def reflection_class(self, k: int) -> int:
        """Index of the W-conjugacy class of the reflection along positive root k"""
        c = self.root_components[k]
        base = sum(1 if comp.simply_laced else 2 for comp in self.spec.components[:c])
        return base + (1 if self.length_classes[k] == LONG else 0)

    # Tables built once per instance

    @cached_property
    def conjugation_table(self) -> List[List[int]]:
        """table[a][b] = index of the positive axis of s_a s_b s_a"""
        roots = self.positive_roots
        return [
            [self._positive_index[self.positive_of(self.reflect_vector(alpha, beta))] for beta in roots]
            for alpha in roots
        ]

    @cached_property
    def reflection_matrices(self) -> Tuple[np.ndarray, ...]:
        """Matrix of s_beta for every positive root, column j = s_beta(alpha_j)"""
        matrices = []
        for beta in self.positive_roots:
            columns = [self.reflect_vector(beta, simple) for simple in self.simple_roots]
            matrix = np.array(columns, dtype=np.int64).T.copy()
            matrix.setflags(write=False)
            matrices.append(matrix)
        return tuple(matrices)

    @cached_property
    def reflection_lookup(self) -> Dict[bytes, int]:
        return {matrix.tobytes(): k for k, matrix in enumerate(self.reflection_matrices)}


@lru_cache(maxsize=None)
def build_root_system(spec: RootSystemSpec) -> RootSystem:
    """
    Construct the root system of a spec by reflection closure

    Args:
        spec: Validated root system spec

    Returns:
        RootSystem: Shared instance for this spec
    """
    rs = RootSystem(spec)
    app_logger.info(f"Root system {spec.label}: rank {rs.rank}, {len(rs.positive_roots)} positive roots")
    return rs


def check_vector(rs: RootSystem, x: Sequence[int]) -> RootVector:
    x = tuple(int(c) for c in x)
    if len(x) != rs.rank:
        raise DimensionMismatchError(f"vector of length {len(x)} for rank {rs.rank}")
    return x


def check_root(rs: RootSystem, alpha: Sequence[int]) -> RootVector:
    alpha = check_vector(rs, alpha)
    if not rs.is_root(alpha):
        raise NotARootError(f"{list(alpha)} is not a root of {rs.spec.label}")
    return alpha


def inner_product(rs: RootSystem, x: Sequence[int], y: Sequence[int]) -> int:
    """(x|y) under the normalized W-invariant form"""
    return rs.inner(check_vector(rs, x), check_vector(rs, y))


def cartan_integer(rs: RootSystem, x: Sequence[int], alpha: Sequence[int]) -> int:
    """n(x, alpha) = 2(x|alpha)/(alpha|alpha)"""
    x = check_vector(rs, x)
    alpha = check_root(rs, alpha)
    numerator = 2 * rs.inner(x, alpha)
    denominator = rs.inner(alpha, alpha)
    # integral on the root lattice
    assert numerator % denominator == 0
    return numerator // denominator


def reflect(rs: RootSystem, alpha: Sequence[int], x: Sequence[int]) -> RootVector:
    """s_alpha(x) = x - n(x, alpha) alpha"""
    alpha = check_root(rs, alpha)
    return rs.reflect_vector(alpha, check_vector(rs, x))


def height(rs: RootSystem, beta: Sequence[int]) -> int:
    """Sum of the simple-root coefficients of a positive root"""
    beta = check_root(rs, beta)
    if not rs.is_positive_root(beta):
        raise DomainError(f"height is defined for positive roots, got {list(beta)}")
    return sum(beta)


def set_height(rs: RootSystem, reflections: Iterable) -> int:
    """
    h(T): total height of the positive axes of a collection of reflections

    Args:
        rs: Root system
        reflections: Reflections (anything with an ``axis``) or axis vectors

    Returns:
        int: Sum of heights
    """
    return sum(height(rs, rs.positive_of(check_root(rs, getattr(t, "axis", t)))) for t in reflections)


def positive_representative(rs: RootSystem, beta: Sequence[int]) -> RootVector:
    """beta if positive, else -beta"""
    return rs.positive_of(check_root(rs, beta))


def canonical_anchor(rs: RootSystem, component: int, length_class: str) -> Optional[RootVector]:
    """Lexicographically least positive root of a length class in a component"""
    candidates = [
        root for k, root in enumerate(rs.positive_roots)
        if rs.root_components[k] == component and rs.length_classes[k] == length_class
    ]
    return min(candidates) if candidates else None


def _arm_lengths(adjacency: Dict[int, List[int]], branch: int) -> List[int]:
    arms = []
    for start in adjacency[branch]:
        length, previous, node = 1, branch, start
        while True:
            following = [m for m in adjacency[node] if m != previous]
            if not following:
                break
            previous, node = node, following[0]
            length += 1
        arms.append(length)
    return sorted(arms)


def classify_base(rs: RootSystem, base: Sequence[Sequence[int]]) -> RootSystemSpec:
    """
    Identify the Cartan type of the root system spanned by a base

    Args:
        rs: Ambient root system
        base: Roots with pairwise non-positive inner products

    Returns:
        RootSystemSpec: Type of the sub-root-system
    """
    base = [tuple(check_root(rs, b)) for b in base]
    if not base:
        raise DomainError("empty base")
    for i, a in enumerate(base):
        for b in base[i + 1:]:
            if rs.inner(a, b) > 0 or a == b:
                raise DomainError("not a base: positive inner product or repeated root")

    size = len(base)
    adjacency: Dict[int, List[int]] = {i: [] for i in range(size)}
    bonds: Dict[Tuple[int, int], int] = {}
    for i in range(size):
        for j in range(i + 1, size):
            product = rs.inner(base[i], base[j])
            if product:
                adjacency[i].append(j)
                adjacency[j].append(i)
                ni = 2 * product // rs.inner(base[j], base[j])
                nj = 2 * product // rs.inner(base[i], base[i])
                bonds[(i, j)] = ni * nj

    components = []
    unseen = set(range(size))
    while unseen:
        start = min(unseen)
        nodes, stack = {start}, [start]
        while stack:
            node = stack.pop()
            for m in adjacency[node]:
                if m not in nodes:
                    nodes.add(m)
                    stack.append(m)
        unseen -= nodes
        components.append(_classify_connected(rs, base, sorted(nodes), adjacency, bonds))

    return RootSystemSpec(components=tuple(components))


def _classify_connected(rs, base, nodes, adjacency, bonds) -> Component:
    rank = len(nodes)
    node_set = set(nodes)
    multiplicities = [m for (i, j), m in bonds.items() if i in node_set]
    norms = [rs.inner(base[i], base[i]) for i in nodes]
    short_norm = min(norms)
    shorts = sum(1 for n in norms if n == short_norm)

    if 3 in multiplicities:
        return Component(family="G", rank=2)
    if 2 in multiplicities:
        if rank == 4 and shorts == 2:
            return Component(family="F", rank=4)
        if shorts == 1:
            return Component(family="B", rank=rank)
        return Component(family="C", rank=rank)

    branches = [i for i in nodes if len(adjacency[i]) == 3]
    if not branches:
        return Component(family="A", rank=rank)
    arms = _arm_lengths(adjacency, branches[0])
    if arms[0] == 1 and arms[1] == 1:
        return Component(family="D", rank=rank)
    return Component(family="E", rank=rank)


def to_payload(rs: RootSystem) -> RootSystemPayload:
    return RootSystemPayload(
        components=[ComponentPayload(family=c.family, rank=c.rank) for c in rs.spec.components],
        rank=rs.rank,
        cartan=rs.cartan.tolist(),
        gram=rs.gram.tolist(),
        positive_roots=[list(root) for root in rs.positive_roots],
        roots=[list(root) for root in rs.roots],
        length_classes=list(rs.length_classes),
        dominant_short=[list(root) for root in rs.dominant_short],
    )
