"""Verification suites: quantify the structural facts and the homomorphism
theorems over the enumerated catalog and collect every witness."""

import functools
import itertools
import time
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any

import structlog

from matroid_hom import bits
from matroid_hom.catalog import CatalogSpec, enumerate_matroids, subdivisions
from matroid_hom.config import DEFAULT_SUBDIVISION_FIBER_SIZE, MAX_FIBER_SIZE
from matroid_hom.core import (
    Matroid,
    assert_circuit_axioms,
    coloops,
    is_binary,
    is_connected,
    is_crk,
    is_crk_on,
    is_single_circuit,
    restrict,
    series_partition,
)
from matroid_hom.errors import InternalTheoremViolation, InvalidParameters, MatroidError
from matroid_hom.maps import GroundMap, all_homomorphisms
from matroid_hom.structure import (
    Witness,
    _decompose,
    _lemma1,
    _theorem1,
    _theorem4,
    binary_obstruction,
    check_fact2,
    check_fact3,
    check_fact4,
    check_fact5,
    check_fact6,
    check_fact7,
    check_subdivision_binary,
    check_subdivision_roundtrip,
)

logger = structlog.stdlib.get_logger(__name__)

FACT1_MAX_SIZE = 4
ROUNDTRIP_MAX_GROUND_SIZE = 4


@dataclass
class SuiteReport:
    suite: str
    parameters: dict[str, Any] = field(default_factory=dict)
    checks_run: int = 0
    failures: list[Witness] = field(default_factory=list)
    counts: Counter[str] = field(default_factory=Counter)
    skipped: Counter[str] = field(default_factory=Counter)
    notes: dict[str, Counter[str]] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, witness: Witness) -> None:
        self.checks_run += 1
        self.counts[witness.kind] += 1
        if not witness.passed:
            logger.warning("Check failed", suite=self.suite, witness=witness.describe())
            self.failures.append(witness)

    def skip(self, kind: str, n: int = 1) -> None:
        self.skipped[kind] += n

    def note(self, topic: str, value: Any, n: int = 1) -> None:
        self.notes.setdefault(topic, Counter())[str(value)] += n

    def merge(self, other: "SuiteReport") -> "SuiteReport":
        if other.suite != self.suite:
            raise InvalidParameters(f"cannot merge {other.suite} into {self.suite}")
        notes = {topic: Counter(values) for topic, values in self.notes.items()}
        for topic, values in other.notes.items():
            notes.setdefault(topic, Counter()).update(values)
        return SuiteReport(
            suite=self.suite,
            parameters=self.parameters or other.parameters,
            checks_run=self.checks_run + other.checks_run,
            failures=sorted([*self.failures, *other.failures], key=Witness.sort_key),
            counts=self.counts + other.counts,
            skipped=self.skipped + other.skipped,
            notes=notes,
            elapsed=max(self.elapsed, other.elapsed),
        )

    def to_dict(self) -> dict[str, Any]:
        # elapsed is left out so reports are reproducible byte for byte
        return {
            "suite": self.suite,
            "passed": self.passed,
            "parameters": self.parameters,
            "checks_run": self.checks_run,
            "counts": dict(sorted(self.counts.items())),
            "skipped": dict(sorted(self.skipped.items())),
            "notes": {
                topic: dict(sorted(values.items()))
                for topic, values in sorted(self.notes.items())
            },
            "failures": [w.to_dict() for w in sorted(self.failures, key=Witness.sort_key)],
        }

    def lines(self) -> list[str]:
        verdict = "ok" if self.passed else "FAILED"
        out = [
            f"{self.suite}: {verdict}, {self.checks_run} checks, "
            f"{len(self.failures)} failures ({self.elapsed:.1f}s)"
        ]
        out += [f"  {kind}: {n}" for kind, n in sorted(self.counts.items())]
        out += [f"  skipped {kind}: {n}" for kind, n in sorted(self.skipped.items())]
        for topic, values in sorted(self.notes.items()):
            shown = ", ".join(f"{k}={v}" for k, v in sorted(values.items()))
            out.append(f"  note {topic}: {shown}")
        out += [f"  {w.describe()}" for w in sorted(self.failures, key=Witness.sort_key)]
        return out


def _guarded(report: SuiteReport, kind: str, check: Callable[[], Witness]) -> None:
    """Run one check; a violated post-check is a failing witness."""
    try:
        report.record(check())
    except InternalTheoremViolation as exc:
        witness = exc.witness or Witness(kind, False, detail=str(exc))
        report.record(witness)


def _chunks(items: Sequence[Any], n: int) -> list[Sequence[Any]]:
    size = -(-len(items) // n) if items else 1
    return [items[i : i + size] for i in range(0, len(items), size)] or [items]


def _fan_out(
    worker: Callable[[Sequence[Any]], SuiteReport],
    items: Sequence[Any],
    workers: int,
    empty: SuiteReport,
) -> SuiteReport:
    if workers < 1:
        raise InvalidParameters(f"workers must be positive, got {workers}")
    if workers == 1 or len(items) < 2:
        return empty.merge(worker(items))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(worker, _chunks(items, workers)))
    return functools.reduce(SuiteReport.merge, parts, empty)


# facts


def _fact1(report: SuiteReport) -> None:
    """Set images under every function between sets of size <= 4."""
    for n, m in itertools.product(range(1, FACT1_MAX_SIZE + 1), repeat=2):
        subsets = range(1 << n)
        for assignment in itertools.product(range(m), repeat=n):

            def image(A: int) -> int:
                return bits.from_indices(assignment[i] for i in bits.indices(A))

            images = [image(A) for A in subsets]
            bad = next(
                (
                    (A, B)
                    for A, B in itertools.product(subsets, repeat=2)
                    if not bits.is_subset(images[A] ^ images[B], images[A ^ B])
                    or not bits.is_subset(images[A] & ~images[B], images[A & ~B])
                    or images[A | B] != images[A] | images[B]
                ),
                None,
            )
            report.record(
                Witness(
                    "fact1",
                    bad is None,
                    detail=f"f={assignment} into {m}"
                    + ("" if bad is None else f" A={bad[0]:b} B={bad[1]:b}"),
                )
            )


def _facts_for(M: Matroid, report: SuiteReport) -> None:
    n = len(M.ground)
    full = M.ground.full
    _guarded(report, "circuit_axioms", lambda: _axioms(M))
    connected = is_connected(M)

    # Fact 2: every CR^k restriction, k <= 3, extended towards every outside element
    if connected:
        for A in bits.by_size(n):
            for k in (1, 2, 3):
                if not is_crk_on(M, A, k):
                    continue
                for x in bits.indices(full & ~A):
                    report.record(check_fact2(M, A, x, k))
    else:
        report.skip("fact2")

    cr2, cr3 = is_crk(M, 2), is_crk(M, 3)
    if cr2:
        for A, B in itertools.combinations(M.circuits, 2):
            report.record(check_fact3(M, A, B))
        witness = check_fact5(M)
        report.record(witness)
        report.note("fact5 k", witness.detail)
    else:
        report.skip("fact3")
        report.skip("fact5")

    cr2_parts = [E for E in bits.by_size(n) if is_crk_on(M, E, 2)]
    instances = 0
    for E1, E2 in itertools.combinations_with_replacement(cr2_parts, 2):
        if is_crk_on(M, E1 | E2, 3):
            instances += 1
            report.record(check_fact4(M, E1, E2))
    if not instances:
        report.skip("fact4")

    if cr3:
        for A, B, C in itertools.product(M.circuits, repeat=3):
            if B != C and not A & B:
                report.record(check_fact6(M, A, B, C))
        for A, B in itertools.combinations(M.circuits, 2):
            if not A & B:
                continue
            if A | B == full:
                loose = check_fact7(M, A, B, strict=False)
                report.note("fact7 with A ∪ B = E(M)", "holds" if loose.passed else "fails")
            else:
                report.record(check_fact7(M, A, B))
    else:
        report.skip("fact6")
        report.skip("fact7")

    if connected and not coloops(M):
        report.record(check_subdivision_binary(M))
        if n <= ROUNDTRIP_MAX_GROUND_SIZE:
            for sub in subdivisions(M, MAX_FIBER_SIZE, include_trivial=True):
                report.record(check_subdivision_roundtrip(M, sub.fibers))
    if connected and not is_binary(M):
        _guarded(report, "binary_obstruction", lambda: binary_obstruction(M))


def _axioms(M: Matroid) -> Witness:
    try:
        assert_circuit_axioms(M)
    except MatroidError as exc:
        return Witness("circuit_axioms", False, M, detail=str(exc))
    return Witness("circuit_axioms", True, M)


def _facts_worker(matroids: Sequence[Matroid]) -> SuiteReport:
    report = SuiteReport("facts")
    for M in matroids:
        _facts_for(M, report)
    return report


def verify_facts_suite(spec: CatalogSpec, *, workers: int = 1) -> SuiteReport:
    """Facts 1-7 and the supplementary subdivision and binary-obstruction
    checks over every matroid `spec` enumerates."""
    started = time.perf_counter()
    matroids = list(enumerate_matroids(spec))
    logger.info("Facts suite started", matroids=len(matroids), workers=workers)
    report = SuiteReport("facts", parameters={"catalog": spec.to_dict()})
    _fact1(report)
    report = _fan_out(_facts_worker, matroids, workers, report)
    report.elapsed = time.perf_counter() - started
    logger.info(
        "Facts suite finished",
        checks=report.checks_run,
        failures=len(report.failures),
        elapsed=round(report.elapsed, 3),
    )
    return report


# theorems


def _series_classes_on(M: Matroid, A: int, cache: dict[int, int]) -> int:
    if A not in cache:
        cache[A] = len(series_partition(restrict(M, A)).classes)
    return cache[A]


def _theorems_for(M: Matroid, N: Matroid, report: SuiteReport) -> None:
    homs = all_homomorphisms(M, N)
    report.note("pairs", "vacuous" if not homs else "with homomorphisms")
    report.note("homomorphisms", "total", len(homs))
    if not homs:
        return
    single = is_single_circuit(N)
    classes: dict[int, int] = {}
    for f in homs:
        for fiber in f.fibers():
            for x1, x2 in itertools.permutations(bits.indices(fiber), 2):
                for A in M.circuits:
                    if not A >> x1 & 1 or A >> x2 & 1:
                        continue
                    try:
                        witness, B = _lemma1(f, M, N, x1, x2, A)
                    except InternalTheoremViolation as exc:
                        report.record(exc.witness)
                        continue
                    report.record(witness)
                    if is_crk_on(M, A | B, 2):
                        k = _series_classes_on(M, A | B, classes) - 2
                        report.note("k of M|(A ∪ B) in series lemma", k)
        verdict = _theorem1(f, M, N)
        report.record(verdict.witness)
        report.note("theorem1 outcome", verdict.outcome)
        if single:
            report.skip("theorem3")
            report.skip("theorem4")
            continue
        _guarded(report, "theorem3", lambda: _decomposed(f, M, N))
        report.record(_theorem4(M, N))


def _decomposed(f: GroundMap, M: Matroid, N: Matroid) -> Witness:
    decomposition = _decompose(f, M, N)
    return Witness(
        "theorem3",
        decomposition.certificate.ok,
        M,
        target=N,
        detail=f"H has {len(decomposition.H.circuits)} circuits",
    )


def _theorems_worker(job: tuple[Sequence[Matroid], Sequence[Matroid]]) -> SuiteReport:
    sources, targets = job
    report = SuiteReport("theorems")
    for M in sources:
        for N in targets:
            if len(N.ground) <= len(M.ground):
                _theorems_for(M, N, report)
    return report


def theorem_sources(
    spec: CatalogSpec,
    subdivisions_max_n: int | None = None,
    fiber: int = DEFAULT_SUBDIVISION_FIBER_SIZE,
) -> list[Matroid]:
    """Connected enumerated matroids, then the nontrivial subdivisions of the
    connected ones with at most `subdivisions_max_n` elements."""
    sources = list(enumerate_matroids(replace(spec, connected_only=True)))
    if subdivisions_max_n:
        base = CatalogSpec(subdivisions_max_n, connected_only=True)
        for M in enumerate_matroids(base):
            sources.extend(sub.matroid for sub in subdivisions(M, fiber))
    return sources


def verify_theorems_suite(
    source_spec: CatalogSpec,
    target_spec: CatalogSpec,
    *,
    subdivisions_max_n: int | None = None,
    subdivision_fiber: int = DEFAULT_SUBDIVISION_FIBER_SIZE,
    workers: int = 1,
) -> SuiteReport:
    """Series lemma, the series-class dichotomy, the decomposition and the
    binary-source theorem over every homomorphism from a connected source
    onto a binary target."""
    if target_spec.max_ground_size > source_spec.max_ground_size:
        raise InvalidParameters("targets may not be larger than sources")
    started = time.perf_counter()
    sources = theorem_sources(source_spec, subdivisions_max_n, subdivision_fiber)
    targets = list(enumerate_matroids(replace(target_spec, binary=True)))
    logger.info(
        "Theorems suite started",
        sources=len(sources),
        targets=len(targets),
        workers=workers,
    )
    report = SuiteReport(
        "theorems",
        parameters={
            "sources": source_spec.to_dict(),
            "targets": target_spec.to_dict(),
            "subdivisions_max_n": subdivisions_max_n,
            "subdivision_fiber": subdivision_fiber,
        },
    )
    jobs = [(chunk, targets) for chunk in _chunks(sources, workers)]
    report = _fan_out(_theorems_jobs, jobs, workers, report)
    report.elapsed = time.perf_counter() - started
    logger.info(
        "Theorems suite finished",
        checks=report.checks_run,
        failures=len(report.failures),
        elapsed=round(report.elapsed, 3),
    )
    return report


def _theorems_jobs(jobs: Iterable[tuple[Sequence[Matroid], Sequence[Matroid]]]) -> SuiteReport:
    return functools.reduce(
        SuiteReport.merge, map(_theorems_worker, jobs), SuiteReport("theorems")
    )
