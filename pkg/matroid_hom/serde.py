from pathlib import Path
from typing import Any

import orjson


def default(obj):
    # Only need to handle types that orjson doesn't serialize by default
    # https://github.com/ijl/orjson#serialize
    if hasattr(obj, "to_dict") and callable(obj.to_dict):
        return obj.to_dict()
    elif hasattr(obj, "_asdict") and callable(obj._asdict):
        return obj._asdict()
    elif isinstance(obj, BaseException):
        return {"error": type(obj).__name__, "message": str(obj)}
    elif isinstance(obj, (set, frozenset)):  # noqa: UP038
        return sorted(obj)
    elif isinstance(obj, Path):
        return str(obj)
    return None


_option = orjson.OPT_NON_STR_KEYS


def json_dumpb(obj, *, indent: bool = False) -> bytes:
    option = _option | orjson.OPT_INDENT_2 if indent else _option
    return orjson.dumps(obj, default=default, option=option)


def json_dumps(obj, *, indent: bool = False) -> str:
    return json_dumpb(obj, indent=indent).decode()


def json_loads(content: bytes | str | dict) -> Any:
    if isinstance(content, dict):
        return content
    return orjson.loads(content)
