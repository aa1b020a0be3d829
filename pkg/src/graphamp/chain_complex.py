"""Oriented graphs with plaquettes and the boundary operators of their chain complex.

A graph here is the two-level cell complex vertices <- links <- plaquettes.
The boundary of a link is head - tail; the boundary of a plaquette is its
signed link list. Boundary matrices are built in exact integer arithmetic so
that d1 @ d2 == 0 can be checked without tolerances; they are promoted to
floating point only when they enter the Gaussian machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphStructureError, PlaquetteError


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Link:
    """A directed link from tail to head; its boundary is head - tail."""

    id: str
    tail: str
    head: str


@dataclass(frozen=True)
class SignedLink:
    id: str
    sign: int


@dataclass(frozen=True)
class Plaquette:
    """An oriented elementary cycle, stored as (link id, sign) pairs."""

    id: str
    links: tuple[SignedLink, ...]


@dataclass(frozen=True)
class OrientedGraph:
    """Vertices, directed links, and oriented plaquettes.

    Array order is authoritative: matrix rows/columns follow the declared
    vertex, link, and plaquette orderings. Construction enforces structural
    integrity (unique ids, resolvable references, no self-loops, signs +-1,
    no repeated link inside a plaquette). Whether each plaquette actually
    closes is checked when its boundary column is built, see
    :func:`build_boundary_2`.

    Instances are immutable and safe to share between threads.
    """

    vertices: tuple[str, ...]
    links: tuple[Link, ...]
    plaquettes: tuple[Plaquette, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "links", tuple(self.links))
        object.__setattr__(self, "plaquettes", tuple(self.plaquettes))
        validate_structure(self)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_links(self) -> int:
        return len(self.links)

    @property
    def n_plaquettes(self) -> int:
        return len(self.plaquettes)

    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def link_index(self) -> dict[str, int]:
        return {l.id: i for i, l in enumerate(self.links)}


def _check_unique(kind: str, ids: Iterable[str]) -> None:
    seen = set()
    for name in ids:
        if name in seen:
            raise GraphStructureError(f"duplicate {kind} id {name!r}")
        seen.add(name)


def validate_structure(graph: OrientedGraph) -> None:
    """Raise GraphStructureError if the graph's raw data is malformed."""
    _check_unique("vertex", graph.vertices)
    _check_unique("link", (l.id for l in graph.links))
    _check_unique("plaquette", (p.id for p in graph.plaquettes))
    vertex_set = set(graph.vertices)
    for link in graph.links:
        if link.tail not in vertex_set:
            raise GraphStructureError(f"link {link.id!r} has unknown tail {link.tail!r}")
        if link.head not in vertex_set:
            raise GraphStructureError(f"link {link.id!r} has unknown head {link.head!r}")
        if link.tail == link.head:
            raise GraphStructureError(f"link {link.id!r} is a self-loop at {link.tail!r}")
    link_ids = {l.id for l in graph.links}
    for plaq in graph.plaquettes:
        members = set()
        for entry in plaq.links:
            if entry.id not in link_ids:
                raise GraphStructureError(
                    f"plaquette {plaq.id!r} references unknown link {entry.id!r}"
                )
            if entry.sign not in (1, -1):
                raise GraphStructureError(
                    f"plaquette {plaq.id!r} entry {entry.id!r} has sign {entry.sign}, expected +/-1"
                )
            if entry.id in members:
                raise GraphStructureError(
                    f"plaquette {plaq.id!r} repeats link {entry.id!r}"
                )
            members.add(entry.id)


@dataclass(frozen=True, eq=False)
class LinkValues:
    """One real value per link, in the graph's link order.

    Values are dimensionless inside the engine; any physical length or
    action unit lives outside it.
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float)
        if arr.ndim != 1:
            raise ValueError("link values must be a one-dimensional vector")
        if not np.all(np.isfinite(arr)):
            raise ValueError("link values must be finite")
        object.__setattr__(self, "values", _frozen_array(arr, float))

    def __len__(self) -> int:
        return len(self.values)


def as_link_vector(e, n_links: int) -> np.ndarray:
    """Coerce LinkValues or array-like to a float vector of length n_links."""
    values = e.values if isinstance(e, LinkValues) else np.asarray(e, dtype=float)
    if values.shape != (n_links,):
        raise ValueError(
            f"expected {n_links} link values, got shape {values.shape}"
        )
    return values


def build_boundary_1(graph: OrientedGraph) -> np.ndarray:
    """Vertex-by-link incidence matrix: -1 at each link's tail row, +1 at its head row."""
    vidx = graph.vertex_index()
    d1 = np.zeros((graph.n_vertices, graph.n_links), dtype=np.int64)
    for col, link in enumerate(graph.links):
        d1[vidx[link.tail], col] = -1
        d1[vidx[link.head], col] = 1
    d1.setflags(write=False)
    return d1


def build_boundary_2(graph: OrientedGraph) -> np.ndarray:
    """Link-by-plaquette matrix of signed memberships.

    Each plaquette must close: the signed sum of its link boundaries has to
    vanish at every vertex. A non-closing plaquette raises PlaquetteError
    naming the offender.
    """
    vidx = graph.vertex_index()
    lidx = graph.link_index()
    link_by_id = {l.id: l for l in graph.links}
    d2 = np.zeros((graph.n_links, graph.n_plaquettes), dtype=np.int64)
    for col, plaq in enumerate(graph.plaquettes):
        closure = np.zeros(graph.n_vertices, dtype=np.int64)
        for entry in plaq.links:
            link = link_by_id[entry.id]
            d2[lidx[entry.id], col] = entry.sign
            closure[vidx[link.head]] += entry.sign
            closure[vidx[link.tail]] -= entry.sign
        if np.any(closure):
            open_at = [graph.vertices[i] for i in np.nonzero(closure)[0]]
            raise PlaquetteError(
                f"plaquette {plaq.id!r} does not close; boundary is open at {open_at}"
            )
    d2.setflags(write=False)
    return d2


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """The pair of integer boundary matrices (d1, d2)."""

    d1: np.ndarray
    d2: np.ndarray

    def __post_init__(self):
        d1 = _frozen_array(self.d1, np.int64)
        d2 = _frozen_array(self.d2, np.int64)
        if d1.ndim != 2 or d2.ndim != 2:
            raise ValueError("boundary operators must be matrices")
        if d1.shape[1] != d2.shape[0]:
            raise ValueError(
                f"shape mismatch: d1 is {d1.shape}, d2 is {d2.shape}"
            )
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)

    @classmethod
    def from_graph(cls, graph: OrientedGraph) -> "ChainComplex":
        return cls(build_boundary_1(graph), build_boundary_2(graph))

    @property
    def n_vertices(self) -> int:
        return self.d1.shape[0]

    @property
    def n_links(self) -> int:
        return self.d1.shape[1]


@dataclass(frozen=True, eq=False)
class BoundaryCheck:
    ok: bool
    residual: np.ndarray


def verify_boundary_of_boundary(cc: ChainComplex) -> BoundaryCheck:
    """Check d1 @ d2 == 0 in exact integer arithmetic; the residual is returned for diagnostics."""
    residual = cc.d1 @ cc.d2
    return BoundaryCheck(ok=not np.any(residual), residual=_frozen_array(residual, np.int64))


def apply_d1(cc: ChainComplex, e) -> np.ndarray:
    """Apply the link-to-vertex boundary to a vector of link values."""
    values = as_link_vector(e, cc.n_links)
    return cc.d1.astype(float) @ values
