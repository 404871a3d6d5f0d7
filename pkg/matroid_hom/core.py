"""Circuit-set matroids.

A matroid is stored as its ground set and its circuit family. Element sets are
int bitmasks over the ground's dense indices (bit ``i`` is the ``i``-th
label); single elements are indices. Circuit families are kept sorted in
lexicographic order of their index tuples, so equal matroids compare equal
structurally and "the first circuit" is well defined everywhere.
"""

import functools
import itertools
from collections import Counter
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import networkx as nx
import structlog

from matroid_hom import bits, gf2
from matroid_hom.config import RANK_CACHE_SIZE
from matroid_hom.errors import (
    ElementNotInGround,
    EliminationFails,
    EmptyCircuit,
    EmptyFiber,
    EmptyGround,
    FiberOverlap,
    HasColoops,
    InvalidParameters,
    InvalidVertex,
    NotAntichain,
    NotConnected,
)

if TYPE_CHECKING:
    from matroid_hom.maps import GroundMap

logger = structlog.stdlib.get_logger(__name__)

ElementSet = int
Element = int


@dataclass(frozen=True)
class GroundSet:
    """Ordered, duplicate-free element labels."""

    elements: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        index: dict[str, int] = {}
        for i, label in enumerate(elements):
            if not isinstance(label, str) or not label:
                raise InvalidParameters(f"labels must be nonempty strings, got {label!r}")
            if label in index:
                raise InvalidParameters(f"duplicate label {label!r}")
            index[label] = i
        object.__setattr__(self, "elements", elements)
        object.__setattr__(self, "_index", index)

    @classmethod
    def range(cls, n: int, prefix: str = "e") -> "GroundSet":
        return cls(tuple(f"{prefix}{i}" for i in range(n)))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    @property
    def full(self) -> ElementSet:
        return bits.full(len(self.elements))

    def index(self, label: str) -> Element:
        try:
            return self._index[label]
        except KeyError:
            raise ElementNotInGround((str(label),)) from None

    def label(self, element: Element) -> str:
        return self.elements[element]

    def mask(self, *labels: str) -> ElementSet:
        missing = [str(label) for label in labels if label not in self._index]
        if missing:
            raise ElementNotInGround(missing)
        return bits.from_indices(self._index[label] for label in labels)

    def labels(self, mask: ElementSet) -> tuple[str, ...]:
        return tuple(self.elements[i] for i in bits.indices(mask))

    def check(self, mask: ElementSet) -> ElementSet:
        """Return `mask` if it is a subset of the ground set."""
        if mask < 0 or mask & ~self.full:
            extra = mask & ~self.full if mask >= 0 else 0
            raise ElementNotInGround(tuple(f"#{i}" for i in bits.indices(extra)))
        return mask

    def check_element(self, element: Element) -> Element:
        if not 0 <= element < len(self.elements):
            raise ElementNotInGround((f"#{element}",))
        return element


@dataclass(frozen=True)
class Matroid:
    ground: GroundSet
    circuits: tuple[ElementSet, ...]
    name: str | None = field(default=None, compare=False)
    circuit_set: frozenset[ElementSet] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        circuits = tuple(sorted(set(self.circuits), key=bits.key))
        object.__setattr__(self, "circuits", circuits)
        object.__setattr__(self, "circuit_set", frozenset(circuits))

    def __len__(self) -> int:
        return len(self.ground)

    def __repr__(self) -> str:
        circuits = ",".join(
            "{" + ",".join(self.ground.labels(c)) + "}" for c in self.circuits
        )
        prefix = f"{self.name}: " if self.name else ""
        return f"Matroid({prefix}[{','.join(self.ground)}] {circuits})"

    def labels(self, mask: ElementSet) -> tuple[str, ...]:
        return self.ground.labels(mask)

    def circuit_labels(self) -> list[tuple[str, ...]]:
        return [self.ground.labels(c) for c in self.circuits]

    def describe(self) -> str:
        return self.name or repr(self)

    def with_name(self, name: str | None) -> "Matroid":
        return Matroid(self.ground, self.circuits, name=name)


@dataclass(frozen=True)
class SeriesPartition:
    """Series classes of the elements lying in a circuit of size >= 2, ordered
    by smallest element, with loops and coloops reported apart."""

    classes: tuple[ElementSet, ...]
    loops: ElementSet
    coloops: ElementSet

    def class_of(self, element: Element) -> ElementSet | None:
        for block in self.classes:
            if block >> element & 1:
                return block
        return None


# validation


def check_axioms(ground: GroundSet, circuits: Iterable[ElementSet]) -> None:
    """Raise the first violated circuit axiom, if any."""
    family = sorted(set(circuits), key=bits.key)
    if 0 in family:
        raise EmptyCircuit()
    for a, b in itertools.permutations(family, 2):
        if bits.is_subset(b, a):
            raise NotAntichain(ground.labels(a), ground.labels(b))
    for a, b in itertools.combinations(family, 2):
        for e in bits.indices(a & b):
            union = (a | b) & ~(1 << e)
            if not any(bits.is_subset(c, union) for c in family):
                raise EliminationFails(ground.labels(a), ground.labels(b), ground.label(e))


def validate_circuits(
    ground: GroundSet,
    family: Iterable[Iterable[str] | ElementSet],
    *,
    name: str | None = None,
) -> Matroid:
    """Return the matroid with circuit family `family` if C1-C3 hold."""
    masks = []
    for member in family:
        if isinstance(member, int):
            masks.append(ground.check(member))
        else:
            masks.append(ground.mask(*member))
    check_axioms(ground, masks)
    return Matroid(ground, tuple(masks), name=name)


def assert_circuit_axioms(M: Matroid) -> None:
    check_axioms(M.ground, M.circuits)


# single-matroid queries


def _reindex(mask: ElementSet, position: Mapping[int, int]) -> ElementSet:
    return bits.from_indices(position[i] for i in bits.indices(mask))


def restrict(M: Matroid, A: ElementSet) -> Matroid:
    M.ground.check(A)
    kept = list(bits.indices(A))
    position = {old: new for new, old in enumerate(kept)}
    ground = GroundSet(tuple(M.ground.label(i) for i in kept))
    circuits = tuple(
        _reindex(c, position) for c in M.circuits if bits.is_subset(c, A)
    )
    return Matroid(ground, circuits)


@functools.lru_cache(maxsize=RANK_CACHE_SIZE)
def _rank(circuits: tuple[ElementSet, ...], A: ElementSet) -> int:
    # greedy: every maximal circuit-free subset of A has the same size
    independent = 0
    for i in bits.indices(A):
        candidate = independent | (1 << i)
        if not any(c >> i & 1 and bits.is_subset(c, candidate) for c in circuits):
            independent = candidate
    return bits.popcount(independent)


def rank(M: Matroid, A: ElementSet | None = None) -> int:
    A = M.ground.full if A is None else M.ground.check(A)
    return _rank(M.circuits, A)


def corank(M: Matroid) -> int:
    return len(M.ground) - _rank(M.circuits, M.ground.full)


@functools.lru_cache(maxsize=RANK_CACHE_SIZE)
def _connected_on(circuits: tuple[ElementSet, ...], A: ElementSet) -> bool:
    if bits.popcount(A) <= 1:
        return True
    inside = [c for c in circuits if bits.is_subset(c, A)]
    for x in bits.indices(A):
        reach = 0
        for c in inside:
            if c >> x & 1:
                reach |= c
        if reach != A:
            return False
    return True


def is_connected(M: Matroid) -> bool:
    return _connected_on(M.circuits, M.ground.full)


def is_crk(M: Matroid, k: int) -> bool:
    if k < 1:
        raise InvalidParameters(f"co-rank index must be positive, got {k}")
    return is_connected(M) and corank(M) == k


def is_crk_on(M: Matroid, A: ElementSet, k: int) -> bool:
    """`is_crk(restrict(M, A), k)` without building the restriction."""
    if k < 1:
        raise InvalidParameters(f"co-rank index must be positive, got {k}")
    M.ground.check(A)
    return (
        bits.popcount(A) - _rank(M.circuits, A) == k
        and _connected_on(M.circuits, A)
    )


def loops(M: Matroid) -> ElementSet:
    return bits.from_indices(
        bits.lowest(c) for c in M.circuits if bits.popcount(c) == 1
    )


def coloops(M: Matroid) -> ElementSet:
    covered = 0
    for c in M.circuits:
        covered |= c
    return M.ground.full & ~covered


def series_partition(M: Matroid) -> SeriesPartition:
    loop_mask = loops(M)
    coloop_mask = coloops(M)
    signatures: dict[int, ElementSet] = {}
    for i in bits.indices(M.ground.full & ~loop_mask & ~coloop_mask):
        signature = bits.from_indices(
            j for j, c in enumerate(M.circuits) if c >> i & 1
        )
        signatures[signature] = signatures.get(signature, 0) | (1 << i)
    return SeriesPartition(
        classes=tuple(signatures.values()), loops=loop_mask, coloops=coloop_mask
    )


def in_series(M: Matroid, x: Element, y: Element) -> bool:
    M.ground.check_element(x)
    M.ground.check_element(y)
    return all((c >> x & 1) == (c >> y & 1) for c in M.circuits)


def nonbinary_pair(M: Matroid) -> tuple[ElementSet, ElementSet] | None:
    """First pair of circuits whose symmetric difference is not a disjoint
    union of circuits."""
    memo: dict[ElementSet, bool] = {0: True}

    def partitions(D: ElementSet) -> bool:
        if D not in memo:
            low = D & -D
            memo[D] = any(
                c & low and bits.is_subset(c, D) and partitions(D & ~c)
                for c in M.circuits
            )
        return memo[D]

    for a, b in itertools.combinations(M.circuits, 2):
        if not partitions(a ^ b):
            return a, b
    return None


def is_binary(M: Matroid) -> bool:
    return nonbinary_pair(M) is None


def is_single_circuit(M: Matroid) -> bool:
    return len(M.ground) > 0 and M.circuits == (M.ground.full,)


def is_refinement(M: Matroid, N: Matroid) -> bool:
    """True iff N lives on the ground of M and 𝒞(M) ⊆ 𝒞(N)."""
    return M.ground == N.ground and M.circuit_set <= N.circuit_set


# constructors


def _ground(n: int, labels: Sequence[str] | None) -> GroundSet:
    if labels is None:
        return GroundSet.range(n)
    if len(labels) != n:
        raise InvalidParameters(f"expected {n} labels, got {len(labels)}")
    return GroundSet(tuple(labels))


def uniform(r: int, n: int, labels: Sequence[str] | None = None) -> Matroid:
    if not 0 <= r <= n:
        raise InvalidParameters(f"U{r},{n} needs 0 <= r <= n")
    ground = _ground(n, labels)
    circuits = tuple(
        bits.from_indices(combo) for combo in itertools.combinations(range(n), r + 1)
    )
    return Matroid(ground, circuits, name=f"U{r},{n}")


def _is_cycle(graph: nx.MultiGraph, edges: Sequence[tuple[int, int]], mask: ElementSet) -> bool:
    sub = graph.edge_subgraph((*edges[i], i) for i in bits.indices(mask))
    return all(degree == 2 for _, degree in sub.degree()) and nx.is_connected(sub)


def cycle_matroid(
    vertices: int,
    edges: Sequence[tuple[int, int]],
    labels: Sequence[str] | None = None,
    *,
    name: str | None = None,
) -> Matroid:
    """Cycle matroid of a multigraph; parallel edges and self-loops allowed."""
    edges = [tuple(edge) for edge in edges]
    ground = _ground(len(edges), labels)
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(vertices))
    for i, (u, v) in enumerate(edges):
        for w in (u, v):
            if not isinstance(w, int) or not 0 <= w < vertices:
                raise InvalidVertex(w, vertices)
        graph.add_edge(u, v, key=i)
    circuits = tuple(
        mask for mask in range(1, 1 << len(edges)) if _is_cycle(graph, edges, mask)
    )
    return Matroid(ground, circuits, name=name)


def vector_matroid_gf2(
    columns: Sequence[int],
    labels: Sequence[str] | None = None,
    *,
    name: str | None = None,
) -> Matroid:
    """Matroid of GF(2) column vectors given as ints."""
    ground = _ground(len(columns), labels)
    circuits: list[ElementSet] = []
    for mask in bits.by_size(len(columns)):
        if any(bits.is_subset(c, mask) for c in circuits):
            continue
        if not gf2.is_independent([columns[i] for i in bits.indices(mask)]):
            circuits.append(mask)
    return Matroid(ground, tuple(circuits), name=name)


def subdivide(
    H: Matroid, fibers: Mapping[str, Sequence[str]]
) -> tuple[Matroid, "GroundMap"]:
    """Replace each element of H by its fiber, inflating every circuit.

    Returns the subdivision and its collapse map onto H, a homeomorphism.
    """
    from matroid_hom.maps import GroundMap

    unknown = [label for label in fibers if label not in H.ground]
    if unknown:
        raise ElementNotInGround(unknown)
    labels: list[str] = []
    origin: list[int] = []
    blocks: list[ElementSet] = []
    seen: set[str] = set()
    for i, label in enumerate(H.ground):
        fiber = tuple(fibers.get(label, ()))
        if not fiber:
            raise EmptyFiber(label)
        overlap = [x for x in fiber if x in seen] or [
            x for x, count in Counter(fiber).items() if count > 1
        ]
        if overlap:
            raise FiberOverlap(overlap)
        block = 0
        for x in fiber:
            block |= 1 << len(labels)
            labels.append(x)
            origin.append(i)
            seen.add(x)
        blocks.append(block)
    ground = GroundSet(tuple(labels))
    circuits = tuple(
        functools.reduce(lambda acc, i: acc | blocks[i], bits.indices(c), 0)
        for c in H.circuits
    )
    name = f"subdivision of {H.name}" if H.name else None
    M = Matroid(ground, circuits, name=name)
    return M, GroundMap(ground, H.ground, tuple(origin))


def series_quotient(M: Matroid) -> tuple[Matroid, "GroundMap"]:
    """Collapse each series class (and each loop) to its first element."""
    from matroid_hom.maps import GroundMap

    if not is_connected(M):
        raise NotConnected()
    partition = series_partition(M)
    if partition.coloops:
        raise HasColoops(M.labels(partition.coloops))
    blocks = sorted(
        [*partition.classes, *(1 << i for i in bits.indices(partition.loops))],
        key=bits.lowest,
    )
    assignment = [0] * len(M.ground)
    for b, block in enumerate(blocks):
        for i in bits.indices(block):
            assignment[i] = b
    ground = GroundSet(tuple(M.ground.label(bits.lowest(block)) for block in blocks))
    circuits = tuple(
        bits.from_indices(assignment[i] for i in bits.indices(c)) for c in M.circuits
    )
    name = f"series quotient of {M.name}" if M.name else None
    H = Matroid(ground, circuits, name=name)
    return H, GroundMap(M.ground, ground, tuple(assignment))


# isomorphism


def _signatures(M: Matroid) -> list[tuple[int, ...]]:
    return [
        tuple(sorted(bits.popcount(c) for c in M.circuits if c >> i & 1))
        for i in range(len(M.ground))
    ]


def isomorphic(M: Matroid, N: Matroid) -> "GroundMap | None":
    """First bijection E(M) -> E(N), in lexicographic order of assignments,
    carrying 𝒞(M) onto 𝒞(N); None if there is none.

    Ground maps need a nonempty source, so an empty ground raises
    `EmptyGround`.
    """
    from matroid_hom.maps import GroundMap

    n = len(M.ground)
    if not n or not N.ground:
        raise EmptyGround()
    if n != len(N.ground) or len(M.circuits) != len(N.circuits):
        return None
    if Counter(map(bits.popcount, M.circuits)) != Counter(map(bits.popcount, N.circuits)):
        return None
    source_sigs, target_sigs = _signatures(M), _signatures(N)
    if Counter(source_sigs) != Counter(target_sigs):
        return None

    # each circuit is checked once its highest element has an image
    closing: list[list[ElementSet]] = [[] for _ in range(n)]
    for c in M.circuits:
        closing[c.bit_length() - 1].append(c)
    assignment = [0] * n
    used = 0

    def image(c: ElementSet) -> ElementSet:
        return bits.from_indices(assignment[i] for i in bits.indices(c))

    def extend(i: int) -> bool:
        nonlocal used
        if i == n:
            return True
        for j in range(n):
            if used >> j & 1 or target_sigs[j] != source_sigs[i]:
                continue
            assignment[i] = j
            used |= 1 << j
            if all(image(c) in N.circuit_set for c in closing[i]) and extend(i + 1):
                return True
            used &= ~(1 << j)
        return False

    if not extend(0):
        return None
    return GroundMap(M.ground, N.ground, tuple(assignment))
