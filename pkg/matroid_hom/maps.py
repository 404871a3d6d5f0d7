"""Ground-set maps and the homomorphism, homeomorphism and circuit-injection
predicates."""

from collections.abc import Callable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import Literal

from matroid_hom import bits
from matroid_hom.core import Element, ElementSet, GroundSet, Matroid
from matroid_hom.errors import (
    ElementNotInGround,
    EmptyGround,
    GroundMismatch,
    SizeMismatch,
)

Reason = Literal["NotOnto", "CircuitNotPreserved", "PreimageNotCircuit", "NotInjective"]


@dataclass(frozen=True)
class GroundMap:
    """Total map source -> target; surjectivity is computed."""

    source: GroundSet
    target: GroundSet
    assignment: tuple[Element, ...]

    def __post_init__(self) -> None:
        assignment = tuple(self.assignment)
        if not len(self.source):
            raise EmptyGround()
        if len(assignment) != len(self.source):
            raise GroundMismatch(
                f"map assigns {len(assignment)} images to {len(self.source)} elements"
            )
        for y in assignment:
            self.target.check_element(y)
        object.__setattr__(self, "assignment", assignment)

    @classmethod
    def from_labels(
        cls, source: GroundSet, target: GroundSet, mapping: Mapping[str, str]
    ) -> "GroundMap":
        unknown = [x for x in mapping if x not in source]
        unknown += [y for y in mapping.values() if y not in target]
        if unknown:
            raise ElementNotInGround(unknown)
        missing = [x for x in source if x not in mapping]
        if missing:
            raise GroundMismatch(f"partial map, no image for {','.join(missing)}")
        return cls(source, target, tuple(target.index(mapping[x]) for x in source))

    def __call__(self, x: Element) -> Element:
        return self.assignment[x]

    @property
    def is_surjective(self) -> bool:
        return bits.from_indices(self.assignment) == self.target.full

    @property
    def is_injective(self) -> bool:
        return len(set(self.assignment)) == len(self.assignment)

    def fibers(self) -> tuple[ElementSet, ...]:
        """Preimage of each target element, in target order."""
        fibers = [0] * len(self.target)
        for x, y in enumerate(self.assignment):
            fibers[y] |= 1 << x
        return tuple(fibers)

    def to_labels(self) -> dict[str, str]:
        return {
            self.source.label(x): self.target.label(y)
            for x, y in enumerate(self.assignment)
        }

    def __repr__(self) -> str:
        pairs = ",".join(f"{x}->{y}" for x, y in self.to_labels().items())
        return f"GroundMap({pairs})"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a map predicate, truthy iff it holds.

    On failure `circuit` is the offending circuit (of the source for
    CircuitNotPreserved, of the target for PreimageNotCircuit) and `image` its
    image or preimage; `element` is the uncovered or overloaded target element.
    """

    holds: bool
    reason: Reason | None = None
    circuit: ElementSet | None = None
    image: ElementSet | None = None
    element: Element | None = None

    def __bool__(self) -> bool:
        return self.holds


HOLDS = Verdict(True)


def identity(ground: GroundSet) -> GroundMap:
    return GroundMap(ground, ground, tuple(range(len(ground))))


def image_of_set(f: GroundMap, A: ElementSet) -> ElementSet:
    f.source.check(A)
    return bits.from_indices(f.assignment[i] for i in bits.indices(A))


def preimage_of_set(f: GroundMap, A: ElementSet) -> ElementSet:
    f.target.check(A)
    return bits.from_indices(x for x, y in enumerate(f.assignment) if A >> y & 1)


def _check_grounds(f: GroundMap, M: Matroid, N: Matroid) -> None:
    if f.source != M.ground:
        raise GroundMismatch("map source is not the ground set of the source matroid")
    if f.target != N.ground:
        raise GroundMismatch("map target is not the ground set of the target matroid")


def is_homomorphism(f: GroundMap, M: Matroid, N: Matroid) -> Verdict:
    _check_grounds(f, M, N)
    uncovered = N.ground.full & ~image_of_set(f, M.ground.full)
    if uncovered:
        return Verdict(False, "NotOnto", element=bits.lowest(uncovered))
    for c in M.circuits:
        image = image_of_set(f, c)
        if image not in N.circuit_set:
            return Verdict(False, "CircuitNotPreserved", circuit=c, image=image)
    return HOLDS


def is_homeomorphism(f: GroundMap, M: Matroid, N: Matroid) -> Verdict:
    verdict = is_homomorphism(f, M, N)
    if not verdict:
        return verdict
    for c in N.circuits:
        preimage = preimage_of_set(f, c)
        if preimage not in M.circuit_set:
            return Verdict(False, "PreimageNotCircuit", circuit=c, image=preimage)
    return HOLDS


def is_circuit_injection(f: GroundMap, M: Matroid, N: Matroid) -> Verdict:
    _check_grounds(f, M, N)
    for y, fiber in enumerate(f.fibers()):
        if bits.popcount(fiber) > 1:
            return Verdict(False, "NotInjective", image=fiber, element=y)
    return is_homomorphism(f, M, N)


def compose(h: GroundMap, g: GroundMap) -> GroundMap:
    """h ∘ g."""
    if g.target != h.source:
        raise GroundMismatch("target of g is not the source of h")
    return GroundMap(g.source, h.target, tuple(h.assignment[y] for y in g.assignment))


# search

Accept = Callable[[int, Sequence[int]], bool]


def _onto_assignments(n: int, m: int, accept: Accept | None = None) -> Iterator[tuple[int, ...]]:
    """Onto assignments range(n) -> range(m) in lexicographic order.

    `accept(i, assignment)` is consulted after position i is filled and cuts
    the branch when it returns False.
    """
    assignment = [0] * n

    def extend(i: int, covered: int) -> Iterator[tuple[int, ...]]:
        if n - i < m - bits.popcount(covered):
            return
        if i == n:
            yield tuple(assignment)
            return
        for y in range(m):
            assignment[i] = y
            if accept is None or accept(i, assignment):
                yield from extend(i + 1, covered | (1 << y))

    yield from extend(0, 0)


def all_surjections(S: GroundSet, T: GroundSet) -> Iterator[GroundMap]:
    if not len(S) or not len(T):
        raise EmptyGround()
    if len(S) < len(T):
        raise SizeMismatch(f"no map from {len(S)} onto {len(T)} elements")
    for assignment in _onto_assignments(len(S), len(T)):
        yield GroundMap(S, T, assignment)


def all_homomorphisms(M: Matroid, N: Matroid) -> list[GroundMap]:
    n, m = len(M.ground), len(N.ground)
    if not n or not m or n < m:
        return []
    closing: list[list[ElementSet]] = [[] for _ in range(n)]
    for c in M.circuits:
        closing[c.bit_length() - 1].append(c)

    def accept(i: int, assignment: Sequence[int]) -> bool:
        return all(
            bits.from_indices(assignment[x] for x in bits.indices(c)) in N.circuit_set
            for c in closing[i]
        )

    return [
        GroundMap(M.ground, N.ground, assignment)
        for assignment in _onto_assignments(n, m, accept)
    ]
