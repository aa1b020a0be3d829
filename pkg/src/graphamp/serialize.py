"""Deterministic JSON and CSV emission.

Floating-point values are rendered with 17 significant digits so reruns of
the same computation produce byte-identical output. Dicts keep insertion
order; CSV uses a header row, comma delimiter, LF line endings, and an
optional '# key=value' metadata preamble.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable

import numpy as np


def format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            # not valid JSON numbers; quoted so the document stays parseable
            return f'"{value}"'
        return format(value, ".17g")
    raise TypeError(f"cannot format {type(value).__name__} as a scalar")


def _dump(obj, pieces: list[str]) -> None:
    if isinstance(obj, str):
        pieces.append(json.dumps(obj))
    elif isinstance(obj, dict):
        pieces.append("{")
        for i, (key, value) in enumerate(obj.items()):
            if i:
                pieces.append(", ")
            if not isinstance(key, str):
                raise TypeError("JSON object keys must be strings")
            pieces.append(json.dumps(key))
            pieces.append(": ")
            _dump(value, pieces)
        pieces.append("}")
    elif isinstance(obj, (list, tuple)):
        pieces.append("[")
        for i, value in enumerate(obj):
            if i:
                pieces.append(", ")
            _dump(value, pieces)
        pieces.append("]")
    elif isinstance(obj, np.ndarray):
        _dump(obj.tolist(), pieces)
    else:
        pieces.append(format_value(obj))


def dumps_json(obj) -> str:
    """Serialize to a single JSON line with normalized float formatting."""
    pieces: list[str] = []
    _dump(obj, pieces)
    pieces.append("\n")
    return "".join(pieces)


def _csv_cell(value) -> str:
    if isinstance(value, str):
        if any(c in value for c in ",\"\n"):
            return '"' + value.replace('"', '""') + '"'
        return value
    return format_value(value)


def csv_lines(
    header: Iterable[str],
    rows: Iterable[Iterable[Any]],
    preamble: dict | None = None,
) -> str:
    lines = []
    for key, value in (preamble or {}).items():
        lines.append(f"# {key}={_csv_cell(value)}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"
