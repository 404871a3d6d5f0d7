"""Executable forms of the structural facts about connected matroids of small
co-rank, the series lemma, and the homeomorphism / circuit-injection
decomposition of homomorphisms onto binary matroids.

Every check re-verifies its conclusion and reports a `Witness` naming the
circuits and elements it used. Checks never trust the statement they test:
a failing post-check is surfaced as a failing witness or as
`InternalTheoremViolation`.
"""

import enum
import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any

import structlog

from matroid_hom import bits
from matroid_hom.core import (
    Element,
    ElementSet,
    Matroid,
    SeriesPartition,
    is_binary,
    is_connected,
    is_crk,
    is_crk_on,
    is_refinement,
    is_single_circuit,
    isomorphic,
    nonbinary_pair,
    restrict,
    series_partition,
    series_quotient,
    subdivide,
    uniform,
    validate_circuits,
)
from matroid_hom.errors import (
    InternalTheoremViolation,
    MatroidError,
    NoCoveringCircuit,
    NoSuchB,
    NoSuchCircuit,
    NotCR2,
    PreconditionViolated,
)
from matroid_hom.maps import (
    GroundMap,
    Verdict,
    compose,
    identity,
    image_of_set,
    is_circuit_injection,
    is_homeomorphism,
    is_homomorphism,
)

logger = structlog.stdlib.get_logger(__name__)


@dataclass(frozen=True)
class Witness:
    """Verdict of one check on one instance.

    `sets` and `elements` live in `matroid`; `image_sets` live in `target`.
    """

    kind: str
    passed: bool
    matroid: Matroid | None = None
    sets: Mapping[str, ElementSet] = field(default_factory=dict)
    elements: Mapping[str, Element] = field(default_factory=dict)
    target: Matroid | None = None
    image_sets: Mapping[str, ElementSet] = field(default_factory=dict)
    detail: str | None = None

    def to_dict(self) -> dict[str, Any]:
        from matroid_hom.documents import matroid_to_document

        out: dict[str, Any] = {"kind": self.kind, "passed": self.passed}
        if self.matroid is not None:
            out["matroid"] = matroid_to_document(self.matroid)
            out["sets"] = {k: list(self.matroid.labels(v)) for k, v in self.sets.items()}
            out["elements"] = {
                k: self.matroid.ground.label(v) for k, v in self.elements.items()
            }
        if self.target is not None:
            out["target"] = matroid_to_document(self.target)
            out["image_sets"] = {
                k: list(self.target.labels(v)) for k, v in self.image_sets.items()
            }
        if self.detail is not None:
            out["detail"] = self.detail
        return out

    def sort_key(self) -> bytes:
        from matroid_hom.serde import json_dumpb

        return json_dumpb(self.to_dict())

    def describe(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        parts = [f"{self.kind} {verdict}"]
        if self.matroid is not None:
            parts.append(f"on {self.matroid.describe()}")
            parts += [
                f"{k}={{{','.join(self.matroid.labels(v))}}}" for k, v in self.sets.items()
            ]
            parts += [f"{k}={self.matroid.ground.label(v)}" for k, v in self.elements.items()]
        if self.target is not None:
            parts += [
                f"{k}={{{','.join(self.target.labels(v))}}}"
                for k, v in self.image_sets.items()
            ]
        if self.detail:
            parts.append(f"({self.detail})")
        return " ".join(parts)


@dataclass(frozen=True)
class DecompositionCertificate:
    homeomorphism: Verdict
    injection: Verdict
    composes: bool
    refines: bool
    subdivision: GroundMap | None
    """Isomorphism from the source onto the subdivision of H by the fibers."""

    @property
    def ok(self) -> bool:
        return bool(
            self.homeomorphism
            and self.injection
            and self.composes
            and self.refines
            and self.subdivision is not None
        )

    def summary(self) -> dict[str, bool]:
        return {
            "g_homeomorphism": self.homeomorphism.holds,
            "h_circuit_injection": self.injection.holds,
            "h_after_g_equals_f": self.composes,
            "H_circuits_in_target": self.refines,
            "source_is_subdivision_of_H": self.subdivision is not None,
        }


@dataclass(frozen=True)
class Decomposition:
    """f = h ∘ g with g: M -> H a homeomorphism and h: H -> N a circuit
    injection; E(H) = E(N) and h is the identity on labels."""

    H: Matroid
    g: GroundMap
    h: GroundMap
    certificate: DecompositionCertificate


@dataclass(frozen=True)
class Cr2Structure:
    k: int
    partition: SeriesPartition
    isomorphism: GroundMap
    """Isomorphism from M onto `model`."""
    model: Matroid
    """uniform(k, k+2) subdivided by the series classes."""


class Theorem1Outcome(enum.StrEnum):
    FIBERS_ALL_SERIES = "FibersAllSeries"
    TARGET_IS_SINGLE_CIRCUIT = "TargetIsSingleCircuit"
    COUNTEREXAMPLE = "Counterexample"


@dataclass(frozen=True)
class Theorem1Verdict:
    outcome: Theorem1Outcome
    witness: Witness


# helpers


def _require_circuits(M: Matroid, *sets: ElementSet) -> None:
    for s in sets:
        if s not in M.circuit_set:
            raise PreconditionViolated(
                f"{{{','.join(M.labels(M.ground.check(s)))}}} is not a circuit"
            )


def _first_minimal(candidates: list[ElementSet], A: ElementSet) -> ElementSet:
    # smallest |B - A| is inclusion-minimal; ties go to the lexicographically first B
    return min(candidates, key=lambda b: (bits.popcount(b & ~A), bits.key(b)))


def _require_homomorphism(f: GroundMap, M: Matroid, N: Matroid) -> None:
    if not is_homomorphism(f, M, N):
        raise PreconditionViolated("map is not a homomorphism")
    if not is_connected(M):
        raise PreconditionViolated("source disconnected")
    if not is_binary(N):
        raise PreconditionViolated("target not binary")


def require_decomposable(f: GroundMap, M: Matroid, N: Matroid) -> None:
    """Hypotheses of the decomposition: f a homomorphism, M connected, N
    binary and not a single circuit."""
    _require_homomorphism(f, M, N)
    if is_single_circuit(N):
        raise PreconditionViolated("target is a single circuit")


# Fact 2


def find_extending_circuit(M: Matroid, A: ElementSet, x: Element) -> ElementSet:
    """A circuit B through x meeting A with B - A minimal."""
    M.ground.check(A)
    M.ground.check_element(x)
    if not A:
        raise PreconditionViolated("A is empty")
    if A >> x & 1:
        raise PreconditionViolated(f"{M.ground.label(x)} lies in A")
    candidates = [b for b in M.circuits if b >> x & 1 and b & A]
    if not candidates:
        raise NoSuchCircuit(
            f"no circuit through {M.ground.label(x)} meets {{{','.join(M.labels(A))}}}"
        )
    return _first_minimal(candidates, A)


def check_fact2(M: Matroid, A: ElementSet, x: Element, k: int) -> Witness:
    if not is_connected(M):
        raise PreconditionViolated("matroid is not connected")
    if not is_crk_on(M, A, k):
        raise PreconditionViolated(f"M|A is not CR{k}")
    B = find_extending_circuit(M, A, x)
    return Witness(
        "fact2",
        is_crk_on(M, A | B, k + 1),
        M,
        sets={"A": A, "B": B},
        elements={"x": x},
        detail=f"k={k}",
    )


# Fact 3


def covering_circuit_cr2(M: Matroid, A: ElementSet, B: ElementSet) -> ElementSet:
    """First circuit containing A Δ B, for distinct circuits of a CR2 matroid."""
    if not is_crk(M, 2):
        raise NotCR2()
    _require_circuits(M, A, B)
    if A == B:
        raise PreconditionViolated("A and B must be distinct")
    for c in M.circuits:
        if bits.is_subset(A ^ B, c):
            return c
    raise NoCoveringCircuit(
        "no circuit contains A Δ B",
        witness=Witness("fact3", False, M, sets={"A": A, "B": B}),
    )


def check_fact3(M: Matroid, A: ElementSet, B: ElementSet) -> Witness:
    try:
        C = covering_circuit_cr2(M, A, B)
    except NoCoveringCircuit as exc:
        return exc.witness
    return Witness("fact3", True, M, sets={"A": A, "B": B, "C": C})


# Fact 4


def check_fact4(M: Matroid, E1: ElementSet, E2: ElementSet) -> Witness:
    if not (is_crk_on(M, E1, 2) and is_crk_on(M, E2, 2)):
        raise PreconditionViolated("M|E1 and M|E2 must be CR2")
    if not is_crk_on(M, E1 | E2, 3):
        raise PreconditionViolated("M|(E1 ∪ E2) must be CR3")
    common = E1 & E2
    inside = next((c for c in M.circuits if bits.is_subset(c, common)), None)
    sets = {"E1": E1, "E2": E2}
    if inside is not None:
        sets["C"] = inside
    return Witness("fact4", inside is not None, M, sets=sets)


# Fact 5


def cr2_structure(M: Matroid) -> Cr2Structure:
    """Series classes of a CR2 matroid and an isomorphism onto the uniform
    matroid U(k, k+2) subdivided by those classes."""
    if not is_crk(M, 2):
        raise NotCR2()
    partition = series_partition(M)
    classes = partition.classes
    k = len(classes) - 2
    complements = {M.ground.full & ~block for block in classes}
    if k < 1 or M.circuit_set != complements:
        raise InternalTheoremViolation(
            "circuits are not the complements of the series classes",
            witness=Witness("fact5", False, M, detail=f"{len(classes)} series classes"),
        )
    representatives = [M.ground.label(bits.lowest(block)) for block in classes]
    model, _ = subdivide(
        uniform(k, k + 2, labels=representatives),
        {rep: M.labels(block) for rep, block in zip(representatives, classes, strict=True)},
    )
    iso = isomorphic(M, model)
    if iso is None:
        raise InternalTheoremViolation(
            "not isomorphic to the subdivided uniform matroid",
            witness=Witness("fact5", False, M, detail=f"k={k}"),
        )
    return Cr2Structure(k, partition, iso, model)


def check_fact5(M: Matroid) -> Witness:
    try:
        structure = cr2_structure(M)
    except InternalTheoremViolation as exc:
        return exc.witness
    return Witness("fact5", True, M, detail=f"k={structure.k}")


# Facts 6 and 7


def check_fact6(M: Matroid, A: ElementSet, B: ElementSet, C: ElementSet) -> Witness:
    if not is_crk(M, 3):
        raise PreconditionViolated("matroid is not CR3")
    _require_circuits(M, A, B, C)
    if B == C:
        raise PreconditionViolated("B and C must be distinct")
    if A & B:
        raise PreconditionViolated("A and B must be disjoint")
    return Witness("fact6", bool(A & C), M, sets={"A": A, "B": B, "C": C})


def check_fact7(M: Matroid, A: ElementSet, B: ElementSet, *, strict: bool = True) -> Witness:
    """With `strict=False` the union A ∪ B may be all of E(M)."""
    if not is_crk(M, 3):
        raise PreconditionViolated("matroid is not CR3")
    _require_circuits(M, A, B)
    if A == B:
        raise PreconditionViolated("A and B must be distinct")
    if not A & B:
        raise PreconditionViolated("A and B must meet")
    if strict and A | B == M.ground.full:
        raise PreconditionViolated("A ∪ B is not a proper subset of E(M)")
    return Witness(
        "fact7" if strict else "fact7_nonstrict",
        is_crk_on(M, A | B, 2),
        M,
        sets={"A": A, "B": B},
    )


# Lemma 1 and Theorem 1


def _lemma1(
    f: GroundMap, M: Matroid, N: Matroid, x1: Element, x2: Element, A: ElementSet
) -> tuple[Witness, ElementSet]:
    pair = (1 << x1) | (1 << x2)
    candidates = [b for b in M.circuits if bits.is_subset(pair, b)]
    if not candidates:
        raise NoSuchB(
            "no circuit contains both elements",
            witness=Witness("lemma1", False, M, sets={"A": A}, elements={"x1": x1, "x2": x2}),
        )
    B = _first_minimal(candidates, A)
    fA, fB = image_of_set(f, A), image_of_set(f, B)
    witness = Witness(
        "lemma1",
        fA == fB,
        M,
        sets={"A": A, "B": B},
        elements={"x1": x1, "x2": x2},
        target=N,
        image_sets={"f(A)": fA, "f(B)": fB},
    )
    return witness, B


def lemma1_check(
    f: GroundMap, M: Matroid, N: Matroid, x1: Element, x2: Element, A: ElementSet
) -> Witness:
    _require_homomorphism(f, M, N)
    M.ground.check_element(x1)
    M.ground.check_element(x2)
    if x1 == x2 or f(x1) != f(x2):
        raise PreconditionViolated("x1 and x2 must be distinct with the same image")
    _require_circuits(M, A)
    if not A >> x1 & 1 or A >> x2 & 1:
        raise PreconditionViolated("A must contain x1 and avoid x2")
    witness, _ = _lemma1(f, M, N, x1, x2, A)
    return witness


def _theorem1(f: GroundMap, M: Matroid, N: Matroid) -> Theorem1Verdict:
    incidence = [
        bits.from_indices(j for j, c in enumerate(M.circuits) if c >> x & 1)
        for x in range(len(M.ground))
    ]
    for fiber in f.fibers():
        x = bits.lowest(fiber)
        y = next((y for y in bits.indices(fiber) if incidence[y] != incidence[x]), None)
        if y is None:
            continue
        separating = M.circuits[bits.lowest(incidence[x] ^ incidence[y])]
        if is_single_circuit(N):
            return Theorem1Verdict(
                Theorem1Outcome.TARGET_IS_SINGLE_CIRCUIT,
                Witness(
                    "theorem1",
                    True,
                    M,
                    sets={"C": separating},
                    elements={"x": x, "y": y},
                    target=N,
                    detail=str(Theorem1Outcome.TARGET_IS_SINGLE_CIRCUIT),
                ),
            )
        return Theorem1Verdict(
            Theorem1Outcome.COUNTEREXAMPLE,
            Witness(
                "theorem1",
                False,
                M,
                sets={"C": separating},
                elements={"x": x, "y": y},
                target=N,
                detail="fiber not in series and target is not a single circuit",
            ),
        )
    return Theorem1Verdict(
        Theorem1Outcome.FIBERS_ALL_SERIES,
        Witness(
            "theorem1", True, M, target=N, detail=str(Theorem1Outcome.FIBERS_ALL_SERIES)
        ),
    )


def theorem1_check(f: GroundMap, M: Matroid, N: Matroid) -> Theorem1Verdict:
    """Either every fiber of f is in series or N is a single circuit."""
    _require_homomorphism(f, M, N)
    return _theorem1(f, M, N)


# Theorems 2-4


def _decompose(f: GroundMap, M: Matroid, N: Matroid) -> Decomposition:
    images = {image_of_set(f, c) for c in M.circuits}
    try:
        H = validate_circuits(N.ground, images, name="H")
    except MatroidError as exc:
        raise InternalTheoremViolation(
            f"images of the circuits do not form a circuit family: {exc}",
            witness=Witness("theorem3", False, M, target=N, detail=str(exc)),
        ) from exc
    g = GroundMap(M.ground, H.ground, f.assignment)
    h = identity(N.ground)
    fibers = {H.ground.label(y): M.labels(fiber) for y, fiber in enumerate(f.fibers())}
    subdivision, _ = subdivide(H, fibers)
    certificate = DecompositionCertificate(
        homeomorphism=is_homeomorphism(g, M, H),
        injection=is_circuit_injection(h, H, N),
        composes=compose(h, g).assignment == f.assignment,
        refines=is_refinement(H, N),
        subdivision=isomorphic(M, subdivision),
    )
    if not certificate.ok:
        failed = [k for k, v in certificate.summary().items() if not v]
        raise InternalTheoremViolation(
            f"decomposition certificate failed: {', '.join(failed)}",
            witness=Witness("theorem3", False, M, target=N, detail=", ".join(failed)),
        )
    return Decomposition(H, g, h, certificate)


def decompose(f: GroundMap, M: Matroid, N: Matroid) -> Decomposition:
    """f = h ∘ g through the matroid H whose circuits are the images of the
    circuits of M."""
    require_decomposable(f, M, N)
    return _decompose(f, M, N)


def _theorem4(M: Matroid, N: Matroid) -> Witness:
    pair = nonbinary_pair(M)
    if pair is None:
        return Witness("theorem4", True, M, target=N)
    A, B = pair
    return Witness(
        "theorem4", False, M, sets={"A": A, "B": B}, target=N, detail="source not binary"
    )


def theorem4_check(f: GroundMap, M: Matroid, N: Matroid) -> Witness:
    require_decomposable(f, M, N)
    return _theorem4(M, N)


# obstructions and subdivisions


def binary_obstruction(M: Matroid) -> Witness:
    """For non-binary M: circuits A, B with M|(A ∪ B) CR2 of type k >= 2 and a
    circuit C ⊇ A Δ B inside A ∪ B. Binary M passes vacuously."""
    if is_binary(M):
        return Witness("binary_obstruction", True, M, detail="binary")
    for A, B in itertools.combinations(M.circuits, 2):
        union = A | B
        if not A & B or not is_crk_on(M, union, 2):
            continue
        k = cr2_structure(restrict(M, union)).k
        if k < 2:
            continue
        cover = next(
            (c for c in M.circuits if bits.is_subset(A ^ B, c) and bits.is_subset(c, union)),
            None,
        )
        if cover is not None:
            return Witness(
                "binary_obstruction",
                True,
                M,
                sets={"A": A, "B": B, "C": cover},
                detail=f"k={k}",
            )
    return Witness(
        "binary_obstruction", False, M, detail="no CR2 union of two circuits with k >= 2"
    )


def check_subdivision_binary(M: Matroid) -> Witness:
    """A subdivision is binary iff the matroid it subdivides is."""
    H, _ = series_quotient(M)
    source, quotient = is_binary(M), is_binary(H)
    return Witness(
        "subdivision_binary",
        source == quotient,
        M,
        detail=f"binary={source} quotient_binary={quotient}",
    )


def check_subdivision_roundtrip(H: Matroid, fibers: Mapping[str, tuple[str, ...]]) -> Witness:
    """Subdividing and collapsing series classes again lands on the series
    quotient of H (on H itself when H has no two elements in series)."""
    M, _ = subdivide(H, fibers)
    collapsed, _ = series_quotient(M)
    expected, _ = series_quotient(H)
    sizes = ",".join(str(len(fibers[label])) for label in H.ground)
    return Witness(
        "subdivision_roundtrip",
        isomorphic(collapsed, expected) is not None,
        H,
        detail=f"fiber sizes {sizes}",
    )
