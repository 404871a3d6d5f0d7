"""Exhaustive enumeration of small labeled matroids and a handful of named
ones."""

import itertools
import re
from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import asdict, dataclass
from typing import Any, NamedTuple

import structlog

from matroid_hom import bits
from matroid_hom.config import MAX_EXHAUSTIVE_GROUND_SIZE, MAX_FIBER_SIZE
from matroid_hom.core import (
    ElementSet,
    GroundSet,
    Matroid,
    coloops,
    cycle_matroid,
    is_binary,
    is_connected,
    is_crk,
    isomorphic,
    series_partition,
    subdivide,
    uniform,
    vector_matroid_gf2,
)
from matroid_hom.errors import InvalidParameters, SpecTooLarge, UnknownName
from matroid_hom.maps import GroundMap

logger = structlog.stdlib.get_logger(__name__)


@dataclass(frozen=True)
class CatalogSpec:
    """Which matroids `enumerate_matroids` emits.

    `binary` filters for binary (True) or non-binary (False) matroids when
    set; `crk` keeps CR^k matroids only.
    """

    max_ground_size: int
    connected_only: bool = False
    binary: bool | None = None
    crk: int | None = None
    coloop_free: bool = False
    series_reduced: bool = False
    min_ground_size: int = 1

    def __post_init__(self) -> None:
        if self.max_ground_size > MAX_EXHAUSTIVE_GROUND_SIZE:
            raise SpecTooLarge(
                f"exhaustive enumeration is limited to {MAX_EXHAUSTIVE_GROUND_SIZE} "
                f"elements, got {self.max_ground_size}"
            )
        if self.min_ground_size < 1 or self.max_ground_size < self.min_ground_size:
            raise InvalidParameters(
                f"ground sizes must satisfy 1 <= min <= max, got "
                f"{self.min_ground_size}..{self.max_ground_size}"
            )
        if self.crk is not None and self.crk < 1:
            raise InvalidParameters(f"CR^k needs k >= 1, got {self.crk}")

    def accepts(self, M: Matroid) -> bool:
        if self.connected_only and not is_connected(M):
            return False
        if self.coloop_free and coloops(M):
            return False
        if self.series_reduced:
            partition = series_partition(M)
            if any(bits.popcount(block) > 1 for block in partition.classes):
                return False
        if self.crk is not None and not is_crk(M, self.crk):
            return False
        if self.binary is not None and is_binary(M) != self.binary:
            return False
        return True

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


# enumeration


def _circuit_families(n: int) -> Iterator[tuple[ElementSet, ...]]:
    """Every circuit family on n elements, each exactly once, in the order
    of their inclusion decisions over subsets by (size, lexicographic).

    A subset containing a chosen circuit is excluded. Each chosen pair A, B
    and e in A ∩ B requires a circuit inside R = (A ∪ B) - e; such a circuit
    comes no later than R, so an unmet requirement forces R in when R is
    reached and kills the branch when R is already behind.
    """
    universe = bits.by_size(n)
    position = {s: i for i, s in enumerate(universe)}
    chosen: list[ElementSet] = []

    def covered(R: ElementSet) -> bool:
        return any(bits.is_subset(c, R) for c in chosen)

    def requirements(s: ElementSet, i: int) -> list[ElementSet] | None:
        pending = []
        for a in chosen:
            for e in bits.indices(a & s):
                R = (a | s) & ~(1 << e)
                if covered(R):
                    continue
                if position[R] < i:
                    return None
                pending.append(R)
        return pending

    def search(i: int, pending: frozenset[ElementSet]) -> Iterator[tuple[ElementSet, ...]]:
        if i == len(universe):
            yield tuple(chosen)
            return
        s = universe[i]
        if covered(s):
            yield from search(i + 1, pending - {s})
            return
        forced = s in pending
        if not forced:
            yield from search(i + 1, pending)
        new = requirements(s, i)
        chosen.append(s)
        if new is not None:
            yield from search(i + 1, (pending - {s}) | frozenset(new))
        chosen.pop()

    yield from search(0, frozenset())


def enumerate_matroids(spec: CatalogSpec) -> Iterator[Matroid]:
    """Labeled matroids on e0..e(n-1) for each n in range, filtered by `spec`.

    Names are `n<n>#<i>`, i counting every matroid on n elements before
    filtering, so a name identifies a matroid across differently filtered
    runs.
    """
    for n in range(spec.min_ground_size, spec.max_ground_size + 1):
        ground = GroundSet.range(n)
        emitted = 0
        for i, family in enumerate(_circuit_families(n)):
            M = Matroid(ground, family, name=f"n{n}#{i}")
            if spec.accepts(M):
                emitted += 1
                yield M
        logger.debug("Enumerated ground size", n=n, total=i + 1, emitted=emitted)


def reduce_isomorphic(matroids: Iterable[Matroid]) -> list[Matroid]:
    """First representative of each isomorphism class, in input order."""
    buckets: dict[Any, list[Matroid]] = defaultdict(list)
    kept: list[Matroid] = []
    for M in matroids:
        invariant = (
            len(M.ground),
            tuple(sorted(map(bits.popcount, M.circuits))),
            tuple(
                sorted(
                    tuple(sorted(bits.popcount(c) for c in M.circuits if c >> x & 1))
                    for x in range(len(M.ground))
                )
            ),
        )
        bucket = buckets[invariant]
        if any(isomorphic(M, N) is not None for N in bucket):
            continue
        bucket.append(M)
        kept.append(M)
    return kept


class Subdivision(NamedTuple):
    fibers: Mapping[str, tuple[str, ...]]
    matroid: Matroid
    collapse: GroundMap


def subdivisions(
    M: Matroid, max_fiber: int = MAX_FIBER_SIZE, *, include_trivial: bool = False
) -> Iterator[Subdivision]:
    """Subdivisions of M by every fiber-size assignment in 1..max_fiber.

    Element `x` with fiber size s becomes `x.0 .. x.(s-1)`; with size 1 it
    keeps its label. The all-singletons assignment is M itself and is skipped
    unless `include_trivial`.
    """
    if not 1 <= max_fiber <= MAX_FIBER_SIZE:
        raise SpecTooLarge(f"fiber sizes are limited to 1..{MAX_FIBER_SIZE}, got {max_fiber}")
    for sizes in itertools.product(range(1, max_fiber + 1), repeat=len(M.ground)):
        if not include_trivial and all(s == 1 for s in sizes):
            continue
        fibers = {
            label: (label,) if size == 1 else tuple(f"{label}.{i}" for i in range(size))
            for label, size in zip(M.ground, sizes, strict=True)
        }
        sub, collapse = subdivide(M, fibers)
        name = f"{M.name}[{''.join(map(str, sizes))}]" if M.name else None
        yield Subdivision(fibers, sub.with_name(name), collapse)


# named matroids

THETA_EDGES = ((0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1))
THETA_LABELS = ("a1", "a2", "b1", "b2", "c1", "c2")

K4_EDGES = tuple(itertools.combinations(range(4), 2))

_UNIFORM = (
    re.compile(r"U(\d+),(\d+)"),
    re.compile(r"U_\{(\d+),(\d+)\}"),
    re.compile(r"uniform\((\d+),\s*(\d+)\)"),
)
_SINGLE_CIRCUIT = re.compile(r"single_circuit\((\d+)\)")
_FREE = re.compile(r"free\((\d+)\)")

NAMES = ("U<r>,<n>", "theta", "MK4", "fano", "single_circuit(<n>)", "free(<n>)")


def theta() -> Matroid:
    return cycle_matroid(5, THETA_EDGES, THETA_LABELS, name="theta")


def mk4() -> Matroid:
    return cycle_matroid(4, K4_EDGES, [f"{u}{v}" for u, v in K4_EDGES], name="MK4")


def fano() -> Matroid:
    # columns are the nonzero vectors of GF(2)^3
    return vector_matroid_gf2(range(1, 8), [str(v) for v in range(1, 8)], name="fano")


def named(name: str) -> Matroid:
    name = name.strip()
    for pattern in _UNIFORM:
        if match := pattern.fullmatch(name):
            return uniform(int(match[1]), int(match[2]))
    if match := _SINGLE_CIRCUIT.fullmatch(name):
        n = int(match[1])
        if n < 1:
            raise InvalidParameters("a single circuit needs at least one element")
        return uniform(n - 1, n).with_name(f"single_circuit({n})")
    if match := _FREE.fullmatch(name):
        n = int(match[1])
        return uniform(n, n).with_name(f"free({n})")
    match name.lower():
        case "theta":
            return theta()
        case "mk4" | "k4" | "m(k4)":
            return mk4()
        case "fano" | "f7":
            return fano()
    raise UnknownName(name)
