"""JSON documents for matroids and ground maps.

A matroid document is ``{"name": ..., "elements": [...], "circuits": [[...]]}``.
A map document is ``{"source": M, "target": N, "map": {"x": "y", ...}}`` where
M and N are matroid documents or paths, relative to the map file, of files
holding one.
"""

from pathlib import Path
from typing import Any, NamedTuple

import orjson

from matroid_hom.core import GroundSet, Matroid, validate_circuits
from matroid_hom.errors import DocumentError, DuplicateCircuit
from matroid_hom.maps import GroundMap
from matroid_hom.serde import json_dumpb, json_loads
from matroid_hom.validation import MapDocument, MatroidDocument, validate


class MapBundle(NamedTuple):
    f: GroundMap
    source: Matroid
    target: Matroid


def read_document(path: str | Path) -> Any:
    path = Path(path)
    content = path.read_bytes()
    try:
        return json_loads(content)
    except orjson.JSONDecodeError as exc:
        raise DocumentError(f"{path}: malformed JSON: {exc}") from None


def write_document(path: str | Path, document: Any) -> None:
    Path(path).write_bytes(json_dumpb(document, indent=True) + b"\n")


def matroid_from_document(document: Any) -> Matroid:
    validate(MatroidDocument, document, "matroid document")
    ground = GroundSet(tuple(document["elements"]))
    masks = []
    seen = set()
    for circuit in document["circuits"]:
        if len(set(circuit)) != len(circuit):
            raise DocumentError(f"circuit {circuit} repeats a label")
        mask = ground.mask(*circuit)
        if mask in seen:
            raise DuplicateCircuit(ground.labels(mask))
        seen.add(mask)
        masks.append(mask)
    return validate_circuits(ground, masks, name=document.get("name"))


def load_matroid(path: str | Path) -> Matroid:
    return matroid_from_document(read_document(path))


def _matroid_ref(ref: Any, base: Path | None) -> Matroid:
    if isinstance(ref, str):
        return load_matroid(base / ref if base is not None else ref)
    return matroid_from_document(ref)


def map_from_document(document: Any, base: Path | None = None) -> MapBundle:
    validate(MapDocument, document, "map document")
    source = _matroid_ref(document["source"], base)
    target = _matroid_ref(document["target"], base)
    f = GroundMap.from_labels(source.ground, target.ground, document["map"])
    return MapBundle(f, source, target)


def load_map(path: str | Path) -> MapBundle:
    path = Path(path)
    return map_from_document(read_document(path), path.parent)


def matroid_to_document(M: Matroid) -> dict[str, Any]:
    document: dict[str, Any] = {}
    if M.name:
        document["name"] = M.name
    document["elements"] = list(M.ground)
    document["circuits"] = [list(c) for c in M.circuit_labels()]
    return document


def map_to_document(
    f: GroundMap,
    source: Matroid | str,
    target: Matroid | str,
) -> dict[str, Any]:
    """`source` and `target` are embedded, or referenced when given as paths."""
    return {
        "source": source if isinstance(source, str) else matroid_to_document(source),
        "target": target if isinstance(target, str) else matroid_to_document(target),
        "map": f.to_labels(),
    }
