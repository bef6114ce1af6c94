"""JSON emission with floats rendered at 17 significant digits.

The stdlib encoder writes the shortest round-trip form; reports here pin an
explicit 17-digit rendering instead so emitted files are bit-comparable
across producers.
"""

from __future__ import annotations

import json
import math
from typing import Any


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"non-finite value {x!r} cannot be serialized")
    return format(x, ".17g")


def dumps(obj: Any, indent: int | None = None) -> str:
    """Serialize dicts/sequences/scalars; floats at 17 significant digits."""
    return "".join(_emit(obj, indent, 0)) + ("\n" if indent is not None else "")


def _emit(obj: Any, indent: int | None, level: int):
    if obj is None:
        yield "null"
    elif obj is True:
        yield "true"
    elif obj is False:
        yield "false"
    elif isinstance(obj, str):
        yield json.dumps(obj)
    elif isinstance(obj, float):
        yield format_float(obj)
    elif isinstance(obj, int):
        yield str(obj)
    elif isinstance(obj, dict):
        yield from _emit_items(
            ((json.dumps(str(k)) + (": " if indent else ":"), v) for k, v in obj.items()),
            "{}", indent, level,
        )
    elif isinstance(obj, (list, tuple)):
        yield from _emit_items((("", v) for v in obj), "[]", indent, level)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit_items(items, brackets: str, indent: int | None, level: int):
    parts = []
    for prefix, value in items:
        parts.append(prefix + "".join(_emit(value, indent, level + 1)))
    if not parts:
        yield brackets
        return
    if indent is None:
        yield brackets[0] + ",".join(parts) + brackets[1]
    else:
        pad = " " * (indent * (level + 1))
        close_pad = " " * (indent * level)
        yield brackets[0] + "\n"
        yield (",\n").join(pad + p for p in parts)
        yield "\n" + close_pad + brackets[1]
