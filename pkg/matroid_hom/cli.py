"""Command-line entry point.

Exit codes: 0 when the input is valid and the property holds, 1 when the
input is valid but a property or hypothesis fails, 2 for invalid input or a
search guard.
"""

import argparse
import logging.config
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

import structlog

from matroid_hom import catalog
from matroid_hom.catalog import CatalogSpec, enumerate_matroids, named, reduce_isomorphic
from matroid_hom.config import DEFAULT_SUBDIVISION_FIBER_SIZE, DEFAULT_TARGETS_MAX_N
from matroid_hom.core import (
    Matroid,
    corank,
    is_binary,
    is_connected,
    is_single_circuit,
    rank,
    series_partition,
)
from matroid_hom.documents import (
    load_map,
    load_matroid,
    map_to_document,
    matroid_to_document,
    write_document,
)
from matroid_hom.errors import InternalTheoremViolation, describe, exit_code_for
from matroid_hom.logging import LOG_CONFIG
from matroid_hom.maps import (
    GroundMap,
    Verdict,
    all_homomorphisms,
    is_circuit_injection,
    is_homeomorphism,
    is_homomorphism,
)
from matroid_hom.serde import json_dumps
from matroid_hom.structure import decompose
from matroid_hom.suites import verify_facts_suite, verify_theorems_suite

logger = structlog.stdlib.get_logger(__name__)


def _out(line: str = "") -> None:
    print(line, file=sys.stdout)


def _set(M: Matroid, mask: int) -> str:
    return "{" + ",".join(M.labels(mask)) + "}"


# check / props


def cmd_check(args: argparse.Namespace) -> int:
    M = load_matroid(args.matroid)
    _out(f"ok: {len(M.ground)} elements, {len(M.circuits)} circuits")
    return 0


def properties(M: Matroid) -> dict[str, Any]:
    partition = series_partition(M)
    r, k = rank(M), corank(M)
    connected = is_connected(M)
    return {
        "name": M.name,
        "elements": len(M.ground),
        "circuits": len(M.circuits),
        "rank": r,
        "corank": k,
        "connected": connected,
        "crk": k if connected and k >= 1 else None,
        "binary": is_binary(M),
        "single_circuit": is_single_circuit(M),
        "series_classes": [list(M.labels(block)) for block in partition.classes],
        "loops": list(M.labels(partition.loops)),
        "coloops": list(M.labels(partition.coloops)),
    }


def cmd_props(args: argparse.Namespace) -> int:
    props = properties(load_matroid(args.matroid))
    if args.json:
        _out(json_dumps(props))
        return 0
    for key, value in props.items():
        if key == "series_classes":
            value = " ".join("{" + ",".join(block) + "}" for block in value)
        elif isinstance(value, list):
            value = "{" + ",".join(value) + "}"
        _out(f"{key}: {value}")
    return 0


# maps


def _explain(verdict: Verdict, f: GroundMap, M: Matroid, N: Matroid) -> str:
    if verdict:
        return "holds"
    match verdict.reason:
        case "NotOnto":
            return f"fails: NotOnto, {N.ground.label(verdict.element)} has no preimage"
        case "CircuitNotPreserved":
            return (
                f"fails: CircuitNotPreserved, circuit {_set(M, verdict.circuit)} "
                f"maps to {_set(N, verdict.image)}"
            )
        case "PreimageNotCircuit":
            return (
                f"fails: PreimageNotCircuit, preimage of circuit {_set(N, verdict.circuit)} "
                f"is {_set(M, verdict.image)}"
            )
        case _:
            return (
                f"fails: NotInjective, {_set(M, verdict.image)} all map to "
                f"{N.ground.label(verdict.element)}"
            )


def verdicts(
    f: GroundMap, M: Matroid, N: Matroid, *, homeo: bool, injection: bool
) -> dict[str, Verdict]:
    checks: dict[str, Callable[..., Verdict]] = {"homomorphism": is_homomorphism}
    if homeo:
        checks["homeomorphism"] = is_homeomorphism
    if injection:
        checks["circuit injection"] = is_circuit_injection
    return {name: check(f, M, N) for name, check in checks.items()}


def cmd_hom(args: argparse.Namespace) -> int:
    f, M, N = load_map(args.map)
    results = verdicts(f, M, N, homeo=args.homeo, injection=args.injection)
    if args.json:
        _out(json_dumps({name: _explain(v, f, M, N) for name, v in results.items()}))
    else:
        for name, verdict in results.items():
            _out(f"{name}: {_explain(verdict, f, M, N)}")
    return 0 if all(results.values()) else 1


def cmd_decompose(args: argparse.Namespace) -> int:
    f, M, N = load_map(args.map)
    d = decompose(f, M, N)
    documents = {
        "H": matroid_to_document(d.H),
        "g": map_to_document(d.g, M, "H.json" if args.out else d.H),
        "h": map_to_document(d.h, "H.json" if args.out else d.H, N),
    }
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for name, document in documents.items():
            write_document(out / f"{name}.json", document)
        logger.info("Wrote decomposition", directory=str(out))
    if args.json:
        _out(json_dumps({**documents, "certificate": d.certificate.summary()}))
        return 0
    _out(f"H: {len(d.H.circuits)} circuits on {len(d.H.ground)} elements")
    for circuit in d.H.circuit_labels():
        _out("  {" + ",".join(circuit) + "}")
    _out("g: " + " ".join(f"{x}->{y}" for x, y in d.g.to_labels().items()))
    _out("h: identity on " + "{" + ",".join(d.H.ground) + "}")
    for name, holds in d.certificate.summary().items():
        _out(f"{name}: {holds}")
    return 0


def cmd_search_homs(args: argparse.Namespace) -> int:
    M, N = load_matroid(args.source), load_matroid(args.target)
    found = 0
    for f in all_homomorphisms(M, N):
        results = verdicts(f, M, N, homeo=args.homeo, injection=args.injection)
        if not all(results.values()):
            continue
        found += 1
        if args.json:
            _out(json_dumps(f.to_labels()))
        else:
            _out(" ".join(f"{x}->{y}" for x, y in f.to_labels().items()))
    logger.info("Search finished", maps=found)
    return 0


# catalog and suites


def cmd_enumerate(args: argparse.Namespace) -> int:
    if args.named:
        _out(json_dumps(matroid_to_document(named(args.named))))
        return 0
    spec = CatalogSpec(
        max_ground_size=args.max_n,
        min_ground_size=args.min_n,
        connected_only=args.connected,
        binary=True if args.binary else None,
        crk=args.crk,
        coloop_free=args.coloop_free,
        series_reduced=args.series_reduced,
    )
    matroids = enumerate_matroids(spec)
    if args.up_to_iso:
        matroids = iter(reduce_isomorphic(matroids))
    for M in matroids:
        _out(json_dumps(matroid_to_document(M)))
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    facts = args.facts or not args.theorems
    theorems = args.theorems or not args.facts
    targets_max_n = (
        min(DEFAULT_TARGETS_MAX_N, args.max_n)
        if args.targets_max_n is None
        else args.targets_max_n
    )
    reports = []
    if facts:
        reports.append(
            verify_facts_suite(CatalogSpec(args.max_n), workers=args.workers)
        )
    if theorems:
        reports.append(
            verify_theorems_suite(
                CatalogSpec(args.max_n),
                CatalogSpec(targets_max_n),
                subdivisions_max_n=args.subdivisions_max_n,
                subdivision_fiber=args.subdivision_fiber,
                workers=args.workers,
            )
        )
    if args.json:
        _out(json_dumps({"reports": [report.to_dict() for report in reports]}))
    else:
        for report in reports:
            for line in report.lines():
                _out(line)
    return 0 if all(report.passed for report in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matroid-hom",
        description="Circuit-set matroids, their homomorphisms and the "
        "homeomorphism / circuit-injection decomposition.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Validate the circuit axioms")
    check.add_argument("matroid", help="Matroid JSON file")
    check.set_defaults(handler=cmd_check)

    props = commands.add_parser("props", help="Print structural properties")
    props.add_argument("matroid", help="Matroid JSON file")
    props.add_argument("--json", action="store_true", help="Emit JSON")
    props.set_defaults(handler=cmd_props)

    hom = commands.add_parser("hom", help="Test a ground map")
    hom.add_argument("map", help="Map JSON file")
    hom.add_argument("--homeo", action="store_true", help="Also require a homeomorphism")
    hom.add_argument(
        "--injection", action="store_true", help="Also require a circuit injection"
    )
    hom.add_argument("--json", action="store_true", help="Emit JSON")
    hom.set_defaults(handler=cmd_hom)

    dec = commands.add_parser("decompose", help="Split a homomorphism as h ∘ g")
    dec.add_argument("map", help="Map JSON file")
    dec.add_argument("--out", help="Directory for H.json, g.json and h.json")
    dec.add_argument("--json", action="store_true", help="Emit JSON")
    dec.set_defaults(handler=cmd_decompose)

    search = commands.add_parser("search-homs", help="List every homomorphism")
    search.add_argument("source", help="Source matroid JSON file")
    search.add_argument("target", help="Target matroid JSON file")
    search.add_argument("--homeo", action="store_true", help="Homeomorphisms only")
    search.add_argument(
        "--injection", action="store_true", help="Circuit injections only"
    )
    search.add_argument("--json", action="store_true", help="Emit JSON lines")
    search.set_defaults(handler=cmd_search_homs)

    enum = commands.add_parser(
        "enumerate", help="Emit small matroids as JSON lines"
    )
    enum.add_argument("--max-n", type=int, default=3, help="Largest ground set")
    enum.add_argument("--min-n", type=int, default=1, help="Smallest ground set")
    enum.add_argument("--connected", action="store_true", help="Connected only")
    enum.add_argument("--binary", action="store_true", help="Binary only")
    enum.add_argument("--crk", type=int, help="CR^k only")
    enum.add_argument("--coloop-free", action="store_true", help="No coloops")
    enum.add_argument(
        "--series-reduced", action="store_true", help="No two elements in series"
    )
    enum.add_argument(
        "--up-to-iso", action="store_true", help="One matroid per isomorphism class"
    )
    enum.add_argument(
        "--named", help=f"Emit one named matroid: {', '.join(catalog.NAMES)}"
    )
    enum.set_defaults(handler=cmd_enumerate)

    verify = commands.add_parser("verify", help="Run the verification suites")
    verify.add_argument("--facts", action="store_true", help="Structural facts suite")
    verify.add_argument("--theorems", action="store_true", help="Theorems suite")
    verify.add_argument("--max-n", type=int, default=4, help="Largest catalog matroid")
    verify.add_argument(
        "--targets-max-n",
        type=int,
        help=f"Largest homomorphism target (default: {DEFAULT_TARGETS_MAX_N}, capped at --max-n)",
    )
    verify.add_argument(
        "--subdivisions-max-n",
        type=int,
        help="Also use subdivisions of connected matroids up to this size as sources",
    )
    verify.add_argument(
        "--subdivision-fiber",
        type=int,
        default=DEFAULT_SUBDIVISION_FIBER_SIZE,
        help="Largest fiber in those subdivisions",
    )
    verify.add_argument("--workers", type=int, default=1, help="Worker processes")
    verify.add_argument("--json", action="store_true", help="Emit a JSON report")
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.config.dictConfig(LOG_CONFIG)
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except Exception as exc:
        print(f"error: {describe(exc)}", file=sys.stderr)
        if isinstance(exc, InternalTheoremViolation) and exc.witness is not None:
            print(f"witness: {exc.witness.describe()}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
