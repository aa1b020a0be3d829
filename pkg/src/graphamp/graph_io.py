"""Reading and writing the JSON graph file format.

A graph file is a single JSON document:

    { "vertices": ["v1", ...],
      "links": [{"id": "e1", "tail": "v1", "head": "v2"}, ...],
      "plaquettes": [{"id": "p1",
                      "links": [{"id": "e4", "sign": 1}, ...]}, ...],
      "link_values": {"e1": 1.0, ...} }        # optional

Array order is authoritative for matrix row/column indices. "plaquettes"
and "link_values" may be omitted.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .chain_complex import Link, OrientedGraph, Plaquette, SignedLink
from .errors import GraphParseError


def _require(mapping: dict, key: str, kind: type, where: str):
    if key not in mapping:
        raise GraphParseError(f"{where}: missing required key {key!r}")
    value = mapping[key]
    if not isinstance(value, kind):
        raise GraphParseError(
            f"{where}: key {key!r} must be {kind.__name__}, got {type(value).__name__}"
        )
    return value


def graph_from_dict(doc: dict) -> tuple[OrientedGraph, np.ndarray | None]:
    """Build a graph (and optional link values) from a decoded JSON document."""
    if not isinstance(doc, dict):
        raise GraphParseError("graph document must be a JSON object")
    vertices = _require(doc, "vertices", list, "graph")
    for i, v in enumerate(vertices):
        if not isinstance(v, str):
            raise GraphParseError(f"vertices[{i}]: vertex ids must be strings")
    links = []
    for i, entry in enumerate(_require(doc, "links", list, "graph")):
        if not isinstance(entry, dict):
            raise GraphParseError(f"links[{i}]: must be an object")
        where = f"links[{i}]"
        links.append(
            Link(
                id=_require(entry, "id", str, where),
                tail=_require(entry, "tail", str, where),
                head=_require(entry, "head", str, where),
            )
        )
    plaquettes = []
    for i, entry in enumerate(doc.get("plaquettes", []) or []):
        if not isinstance(entry, dict):
            raise GraphParseError(f"plaquettes[{i}]: must be an object")
        where = f"plaquettes[{i}]"
        signed = []
        for j, member in enumerate(_require(entry, "links", list, where)):
            if not isinstance(member, dict):
                raise GraphParseError(f"{where}.links[{j}]: must be an object")
            sign = member.get("sign")
            if sign not in (1, -1):
                raise GraphParseError(
                    f"{where}.links[{j}]: sign must be 1 or -1, got {sign!r}"
                )
            signed.append(SignedLink(id=_require(member, "id", str, where), sign=sign))
        plaquettes.append(Plaquette(id=_require(entry, "id", str, where), links=tuple(signed)))

    graph = OrientedGraph(tuple(vertices), tuple(links), tuple(plaquettes))

    link_values = None
    if "link_values" in doc and doc["link_values"] is not None:
        table = doc["link_values"]
        if not isinstance(table, dict):
            raise GraphParseError("link_values must be an object mapping link id to value")
        unknown = set(table) - {l.id for l in links}
        if unknown:
            raise GraphParseError(f"link_values references unknown links {sorted(unknown)}")
        missing = [l.id for l in links if l.id not in table]
        if missing:
            raise GraphParseError(f"link_values missing entries for {missing}")
        try:
            link_values = np.array([float(table[l.id]) for l in links])
        except (TypeError, ValueError) as exc:
            raise GraphParseError(f"link_values entries must be numbers: {exc}") from None
        if not np.all(np.isfinite(link_values)):
            raise GraphParseError("link_values entries must be finite")
    return graph, link_values


def load_graph(path) -> tuple[OrientedGraph, np.ndarray | None]:
    """Load a graph file; raises GraphParseError with position context on bad JSON."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise GraphParseError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    except OSError as exc:
        raise GraphParseError(f"{path}: {exc}") from None
    return graph_from_dict(doc)


def graph_to_dict(graph: OrientedGraph, link_values=None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "vertices": list(graph.vertices),
        "links": [{"id": l.id, "tail": l.tail, "head": l.head} for l in graph.links],
        "plaquettes": [
            {"id": p.id, "links": [{"id": m.id, "sign": m.sign} for m in p.links]}
            for p in graph.plaquettes
        ],
    }
    if link_values is not None:
        values = np.asarray(link_values, dtype=float)
        doc["link_values"] = {l.id: float(values[i]) for i, l in enumerate(graph.links)}
    return doc
