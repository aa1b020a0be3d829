import json
from pathlib import Path

import numpy as np
import pytest

from graphamp import ChainComplex, OrientedGraph, graph_from_dict

FIXTURES = Path(__file__).parent / "fixtures"

# The six-vertex, seven-link, two-plaquette reference complex, pinned
# entry-for-entry in its original link ordering.
SIX_VERTEX_D2 = np.array(
    [
        [-1, 0],
        [-1, 1],
        [0, -1],
        [1, 0],
        [1, 0],
        [0, 1],
        [0, -1],
    ],
    dtype=np.int64,
)

SIX_VERTEX_D1 = np.array(
    [
        [-1, 0, 0, -1, 0, 0, 0],
        [1, -1, -1, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, -1],
        [0, 0, 0, 1, -1, 0, 0],
        [0, 1, 0, 0, 1, -1, 0],
        [0, 0, 0, 0, 0, 1, 1],
    ],
    dtype=np.int64,
)

SIX_VERTEX_K = np.array(
    [
        [2, -1, 0, -1, 0, 0],
        [-1, 3, -1, 0, -1, 0],
        [0, -1, 2, 0, 0, -1],
        [-1, 0, 0, 2, -1, 0],
        [0, -1, 0, -1, 3, -1],
        [0, 0, -1, 0, -1, 2],
    ],
    dtype=np.int64,
)


@pytest.fixture(scope="session")
def six_vertex_path() -> Path:
    return FIXTURES / "six_vertex_two_plaquette.json"


@pytest.fixture(scope="session")
def ladder6_path() -> Path:
    return FIXTURES / "ladder_n6.json"


@pytest.fixture(scope="session")
def six_vertex_doc(six_vertex_path) -> dict:
    return json.loads(six_vertex_path.read_text())


@pytest.fixture(scope="session")
def six_vertex_graph(six_vertex_doc) -> OrientedGraph:
    graph, _ = graph_from_dict(six_vertex_doc)
    return graph


@pytest.fixture(scope="session")
def six_vertex_cc(six_vertex_graph) -> ChainComplex:
    return ChainComplex.from_graph(six_vertex_graph)


def two_vertex_graph() -> OrientedGraph:
    from graphamp import Link

    return OrientedGraph(("v1", "v2"), (Link("e1", "v1", "v2"),))


try:
    from numpy import trapezoid
except ImportError:  # numpy < 2
    from numpy import trapz as trapezoid  # noqa: F401
