import pathlib
from typing import Any

import jsonschema_rs
import orjson

from matroid_hom.errors import DocumentError

with open(pathlib.Path(__file__).parent / "schemas.json") as f:
    schemas_str = f.read()

schemas = orjson.loads(schemas_str)


def _validator_for(name: str) -> Any:
    return jsonschema_rs.validator_for(
        {**schemas["definitions"][name], "definitions": schemas["definitions"]}
    )


MatroidDocument = _validator_for("Matroid")
MapDocument = _validator_for("Map")
SuiteReportDocument = _validator_for("SuiteReport")


def validate(validator: Any, document: Any, what: str) -> None:
    error = next(validator.iter_errors(document), None)
    if error is not None:
        path = "/".join(str(p) for p in error.instance_path)
        where = f" at /{path}" if path else ""
        raise DocumentError(f"invalid {what}{where}: {error.message}")
