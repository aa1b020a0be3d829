"""Difference matrix, source vector, and the self-consistency identity.

Given boundary operator d1, the difference matrix is K = beta * d1 @ d1.T
(the unweighted graph Laplacian, scaled) and the source vector derived from
link values e is J = alpha * d1 @ e. When the link values themselves come
from vertex values, K @ v = (beta/alpha) * J holds identically; verifying it
guards the implementation rather than the mathematics. The all-ones vector
always lies in ker K, which is what makes the action invariant under a
constant shift of the field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain_complex import ChainComplex, LinkValues, OrientedGraph, as_link_vector

NULL_EIGENVALUE_RTOL = 1e-9
SCC_RESIDUAL_RTOL = 1e-10
DIVERGENCE_RTOL = 1e-12


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SccConfig:
    """Scales for the source vector (alpha) and difference matrix (beta)."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if not self.beta > 0:
            raise ValueError("beta must be positive")


@dataclass(frozen=True, eq=False)
class DifferenceMatrix:
    """Symmetric PSD matrix beta * d1 @ d1.T with the scale it was built at."""

    matrix: np.ndarray
    beta: float = 1.0

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("difference matrix must be square")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class SourceVector:
    """Per-vertex signed sum of link values, alpha * d1 @ e.

    Entries must sum to zero (the source is divergence-free); that is
    enforced on construction, so a SourceVector is always a legal input for
    the restricted partition function on a connected graph.
    """

    values: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1:
            raise ValueError("source vector must be one-dimensional")
        if abs(vals.sum()) > DIVERGENCE_RTOL * (1.0 + np.abs(vals).sum()):
            raise ValueError(
                f"source vector is not divergence-free: entries sum to {vals.sum()}"
            )
        object.__setattr__(self, "values", _frozen(vals))

    def __len__(self) -> int:
        return len(self.values)


def as_source_vector(J) -> np.ndarray:
    """Coerce a SourceVector or plain array-like to a float vector."""
    values = J.values if isinstance(J, SourceVector) else np.asarray(J, dtype=float)
    if values.ndim != 1:
        raise ValueError("source vector must be one-dimensional")
    return values


def build_K(cc: ChainComplex, config: SccConfig = SccConfig()) -> DifferenceMatrix:
    """Difference matrix K = beta * d1 @ d1.T.

    The diagonal holds beta * degree and the off-diagonal entries are
    -beta * (link multiplicity), i.e. the scaled graph Laplacian.
    """
    gram = cc.d1 @ cc.d1.T
    return DifferenceMatrix(config.beta * gram.astype(float), beta=config.beta)


def build_J(cc: ChainComplex, e, config: SccConfig = SccConfig()) -> SourceVector:
    """Source vector J = alpha * d1 @ e for link values e."""
    values = as_link_vector(e, cc.n_links)
    return SourceVector(config.alpha * (cc.d1.astype(float) @ values), alpha=config.alpha)


def link_values_from_vertices(graph: OrientedGraph, v) -> LinkValues:
    """Link values induced by vertex values: e = v[head] - v[tail] per link.

    Equivalent to d1.T @ v; a constant v produces zero link values, which is
    the gauge direction.
    """
    vertex_values = np.asarray(v, dtype=float)
    if vertex_values.shape != (graph.n_vertices,):
        raise ValueError(
            f"expected {graph.n_vertices} vertex values, got shape {vertex_values.shape}"
        )
    if not np.all(np.isfinite(vertex_values)):
        raise ValueError("vertex values must be finite")
    vidx = graph.vertex_index()
    e = np.array(
        [vertex_values[vidx[l.head]] - vertex_values[vidx[l.tail]] for l in graph.links]
    )
    return LinkValues(e)


@dataclass(frozen=True)
class SccCheck:
    ok: bool
    residual: float


def verify_scc(cc: ChainComplex, v, config: SccConfig = SccConfig()) -> SccCheck:
    """Check K @ v == (beta/alpha) * J(e) for link values e induced by v.

    Both sides reduce to beta * d1 @ (d1.T @ v); the check exercises the two
    code paths and reports the max-norm residual between them.
    """
    vertex_values = np.asarray(v, dtype=float)
    graph_free_e = cc.d1.T.astype(float) @ vertex_values
    lhs = build_K(cc, config).matrix @ vertex_values
    rhs = (config.beta / config.alpha) * build_J(cc, graph_free_e, config).values
    residual = float(np.max(np.abs(lhs - rhs))) if lhs.size else 0.0
    bound = SCC_RESIDUAL_RTOL * (1.0 + float(np.max(np.abs(vertex_values), initial=0.0)))
    return SccCheck(ok=residual <= bound, residual=residual)


@dataclass(frozen=True, eq=False)
class NullSpace:
    basis: np.ndarray  # columns are orthonormal null vectors
    dimension: int


def gauge_null_space(K: DifferenceMatrix) -> NullSpace:
    """Orthonormal basis of ker K, eigenvalues thresholded at NULL_EIGENVALUE_RTOL * max."""
    eigenvalues, eigenvectors = np.linalg.eigh(K.matrix)
    threshold = NULL_EIGENVALUE_RTOL * float(np.max(np.abs(eigenvalues), initial=0.0))
    null_cols = eigenvalues <= threshold
    basis = eigenvectors[:, null_cols]
    return NullSpace(basis=_frozen(basis), dimension=int(null_cols.sum()))


def action_exponent(K: DifferenceMatrix, J, Q) -> float:
    """Euclidean action exponent S(Q) = -1/2 Q.K.Q + J.Q.

    Invariant under Q -> Q + c*ones whenever the source is divergence-free.
    """
    q = np.asarray(Q, dtype=float)
    j = as_source_vector(J)
    return float(-0.5 * q @ K.matrix @ q + j @ q)
