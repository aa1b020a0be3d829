"""Independent brute-force validators for the closed-form results.

Nothing here shares formula assembly with the code it checks: the
quadrature integrates the restricted Gaussian integrand on a dense grid,
direct_phi re-derives the exponent from a fresh eigendecomposition, and the
SCC sweep re-multiplies boundary matrices from scratch on randomly sampled
connected graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chain_complex import Link, OrientedGraph, Plaquette, SignedLink, build_boundary_1
from .errors import RankLimitError, RowSpaceError
from .scc_core import NULL_EIGENVALUE_RTOL, DifferenceMatrix, as_source_vector

GAUSS_HERMITE = "gauss-hermite"
TRAPEZOID = "trapezoid"

MAX_QUADRATURE_RANK = 4


@dataclass(frozen=True)
class QuadratureSpec:
    """Grid controls: +-axis_bound standard deviations per axis around the
    per-mode mean; points_per_axis defaults to 64 nodes for Gauss-Hermite
    and 200 for the trapezoid rule."""

    mode: str = GAUSS_HERMITE
    axis_bound: float = 12.0
    points_per_axis: int | None = None

    def __post_init__(self):
        if self.mode not in (GAUSS_HERMITE, TRAPEZOID):
            raise ValueError(f"unknown quadrature mode {self.mode!r}")
        if not self.axis_bound > 0:
            raise ValueError("axis_bound must be positive")
        if self.points_per_axis is not None and self.points_per_axis < 2:
            raise ValueError("points_per_axis must be at least 2")

    @property
    def resolved_points(self) -> int:
        if self.points_per_axis is not None:
            return self.points_per_axis
        return 64 if self.mode == GAUSS_HERMITE else 200


@dataclass(frozen=True)
class QuadratureResult:
    log_z: float
    estimated_error: float
    rank: int
    mode: str
    points_per_axis: int


def _row_modes(K: DifferenceMatrix, j: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    eigenvalues, eigenvectors = np.linalg.eigh(np.array(K.matrix))
    threshold = NULL_EIGENVALUE_RTOL * float(np.max(np.abs(eigenvalues), initial=0.0))
    null = eigenvalues <= threshold
    null_proj = eigenvectors[:, null].T @ j
    worst = float(np.max(np.abs(null_proj), initial=0.0))
    if worst > 1e-9 * float(np.linalg.norm(j)):
        raise RowSpaceError(
            f"source vector has a gauge component of magnitude {worst:.3e}; "
            "the restricted integral is undefined for it"
        )
    a = eigenvalues[~null]
    jhat = eigenvectors[:, ~null].T @ j
    return a, jhat


def _axis_grid(a: float, jhat: float, spec: QuadratureSpec, points: int):
    """Nodes and log-weights for one axis; the integrand itself is evaluated
    separately at the nodes."""
    mean = jhat / a
    if spec.mode == GAUSS_HERMITE:
        t, w = np.polynomial.hermite.hermgauss(points)
        scale = math.sqrt(2.0 / a)
        x = mean + scale * t
        log_w = np.log(w) + t**2 + math.log(scale)
    else:
        sigma = 1.0 / math.sqrt(a)
        x = np.linspace(mean - spec.axis_bound * sigma, mean + spec.axis_bound * sigma, points)
        h = x[1] - x[0]
        log_w = np.full(points, math.log(h))
        log_w[0] -= math.log(2.0)
        log_w[-1] -= math.log(2.0)
    return x, log_w


def _log_grid_sum(axis_exponents: list[np.ndarray]) -> float:
    """log of the sum of exp over the full tensor grid of per-axis exponents.

    The grid is swept slab by slab along the first axis; each slab is summed
    with pairwise summation and the slab totals are combined with exact
    (fsum) summation, so the accumulation order cannot move the result.
    """
    shift = sum(float(np.max(c)) for c in axis_exponents)
    first = axis_exponents[0]
    rest = axis_exponents[1:]
    grid = None
    for c in rest:
        grid = c if grid is None else grid[..., None] + c
    slab_sums = []
    for c0 in first:
        slab = c0 if grid is None else c0 + grid
        slab_sums.append(float(np.sum(np.exp(slab - shift))))
    return shift + math.log(math.fsum(slab_sums))


def _quadrature_log_z_at(a, jhat, spec: QuadratureSpec, points: int) -> float:
    axis_exponents = []
    for a_j, jhat_j in zip(a, jhat):
        x, log_w = _axis_grid(float(a_j), float(jhat_j), spec, points)
        integrand_exponent = -0.5 * a_j * x**2 + jhat_j * x
        axis_exponents.append(log_w + integrand_exponent)
    return _log_grid_sum(axis_exponents)


def quadrature_log_z(K: DifferenceMatrix, J, spec: QuadratureSpec = QuadratureSpec()) -> QuadratureResult:
    """Dense numerical integration of the restricted Gaussian over row-space
    coordinates.

    The integrand exp(sum_j -a_j x_j^2 / 2 + Jhat_j x_j) is evaluated at
    every point of the tensor-product grid; the estimated error comes from
    repeating the computation at half resolution. Rank is capped at
    MAX_QUADRATURE_RANK to keep the grid affordable.
    """
    j = as_source_vector(J)
    a, jhat = _row_modes(K, j)
    rank = len(a)
    if rank > MAX_QUADRATURE_RANK:
        raise RankLimitError(
            f"row space has rank {rank} > {MAX_QUADRATURE_RANK}; "
            "use the analytic partition function instead"
        )
    points = spec.resolved_points
    if rank == 0:
        return QuadratureResult(0.0, 0.0, 0, spec.mode, points)
    log_z = _quadrature_log_z_at(a, jhat, spec, points)
    coarse_points = max(8, points // 2)
    coarse = _quadrature_log_z_at(a, jhat, spec, coarse_points)
    return QuadratureResult(
        log_z=log_z,
        estimated_error=abs(log_z - coarse),
        rank=rank,
        mode=spec.mode,
        points_per_axis=points,
    )


def direct_phi(K: DifferenceMatrix, J, hbar_beta: float = 1.0) -> float:
    """Exponent sum Jhat_i^2 / (2 a_i hbar_beta) assembled from scratch."""
    if not hbar_beta > 0:
        raise ValueError("hbar_beta must be positive")
    j = as_source_vector(J)
    a, jhat = _row_modes(K, j)
    return float(math.fsum(jh * jh / (2.0 * av * hbar_beta) for av, jh in zip(a, jhat)))


def random_connected_graph(
    rng: np.random.Generator,
    n_vertices: int,
    extra_links: int | None = None,
    n_plaquettes: int = 0,
) -> OrientedGraph:
    """Random connected multigraph: a random spanning tree plus extra links.

    Parallel links are allowed, self-loops never. If plaquettes are
    requested they are carved out of random closed walks, so they close by
    construction.
    """
    if n_vertices < 1:
        raise ValueError("need at least one vertex")
    vertices = tuple(f"v{i}" for i in range(1, n_vertices + 1))
    pairs: list[tuple[int, int]] = []
    for i in range(1, n_vertices):
        other = int(rng.integers(0, i))
        pairs.append((other, i) if rng.integers(0, 2) else (i, other))
    if extra_links is None:
        extra_links = int(rng.integers(0, n_vertices + 1)) if n_vertices > 1 else 0
    for _ in range(extra_links):
        tail = int(rng.integers(0, n_vertices))
        head = int(rng.integers(0, n_vertices - 1))
        if head >= tail:
            head += 1
        pairs.append((tail, head))
    links = tuple(
        Link(f"e{i + 1}", tail=vertices[t], head=vertices[h]) for i, (t, h) in enumerate(pairs)
    )
    plaquettes = tuple(
        Plaquette(f"p{i + 1}", cycle)
        for i, cycle in enumerate(_random_cycles(rng, n_vertices, pairs, links, n_plaquettes))
    )
    return OrientedGraph(vertices, links, plaquettes)


def _random_cycles(rng, n_vertices, pairs, links, count) -> list[tuple[SignedLink, ...]]:
    if count == 0 or n_vertices < 2:
        return []
    incident: list[list[int]] = [[] for _ in range(n_vertices)]
    for idx, (t, h) in enumerate(pairs):
        incident[t].append(idx)
        incident[h].append(idx)
    cycles = []
    attempts = 0
    while len(cycles) < count and attempts < 60 * count:
        attempts += 1
        here = int(rng.integers(0, n_vertices))
        visited_at = {here: 0}
        walk: list[tuple[int, int]] = []  # (link index, sign)
        path = [here]
        for _ in range(4 * n_vertices):
            options = incident[here]
            if not options:
                break
            choice = int(options[rng.integers(0, len(options))])
            tail, head = pairs[choice]
            sign = 1 if tail == here else -1
            nxt = head if sign == 1 else tail
            walk.append((choice, sign))
            if nxt in visited_at:
                start = visited_at[nxt]
                loop = walk[start:]
                used = [l for l, _ in loop]
                if len(set(used)) == len(used):
                    cycles.append(
                        tuple(SignedLink(links[l].id, s) for l, s in loop)
                    )
                break
            visited_at[nxt] = len(path)
            path.append(nxt)
            here = nxt
    return cycles


@dataclass(frozen=True)
class GraphCheckRecord:
    index: int
    n_vertices: int
    n_links: int
    scc_residual: float
    scc_ok: bool
    divergence_ok: bool
    ones_in_kernel: bool
    rank_ok: bool
    null_uniform_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.scc_ok
            and self.divergence_ok
            and self.ones_in_kernel
            and self.rank_ok
            and self.null_uniform_ok
        )

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "n_vertices": self.n_vertices,
            "n_links": self.n_links,
            "scc_residual": self.scc_residual,
            "scc_ok": self.scc_ok,
            "divergence_ok": self.divergence_ok,
            "ones_in_kernel": self.ones_in_kernel,
            "rank_ok": self.rank_ok,
            "null_uniform_ok": self.null_uniform_ok,
        }


@dataclass(frozen=True)
class SccSweepReport:
    graphs_checked: int
    all_pass: bool
    worst_scc_residual: float
    failures: tuple[GraphCheckRecord, ...]

    def as_dict(self) -> dict:
        return {
            "graphs_checked": self.graphs_checked,
            "all_pass": self.all_pass,
            "worst_scc_residual": self.worst_scc_residual,
            "failures": [f.as_dict() for f in self.failures],
        }


def _check_one_graph(index: int, graph: OrientedGraph, rng) -> GraphCheckRecord:
    d1 = build_boundary_1(graph)
    n = graph.n_vertices
    k_int = d1 @ d1.T
    ones_in_kernel = not np.any(k_int @ np.ones(n, dtype=np.int64))

    v = rng.standard_normal(n)
    d1f = d1.astype(float)
    lhs = (d1f @ d1f.T) @ v
    rhs = d1f @ (d1f.T @ v)
    scc_residual = float(np.max(np.abs(lhs - rhs), initial=0.0))
    scc_ok = scc_residual <= 1e-10 * (1.0 + float(np.max(np.abs(v), initial=0.0)))

    e = rng.standard_normal(graph.n_links)
    j = d1f @ e
    divergence_ok = abs(float(j.sum())) <= 1e-12 * (1.0 + float(np.abs(j).sum()))

    eigenvalues, eigenvectors = np.linalg.eigh(k_int.astype(float))
    threshold = NULL_EIGENVALUE_RTOL * float(np.max(np.abs(eigenvalues), initial=0.0))
    rank = int(np.sum(eigenvalues > threshold))
    rank_ok = rank == n - 1
    null_dim = n - rank
    uniform = np.full(n, 1.0 / math.sqrt(n))
    null_uniform_ok = null_dim == 1 and abs(abs(float(eigenvectors[:, 0] @ uniform)) - 1.0) <= 1e-9

    return GraphCheckRecord(
        index=index,
        n_vertices=n,
        n_links=graph.n_links,
        scc_residual=scc_residual,
        scc_ok=scc_ok,
        divergence_ok=divergence_ok,
        ones_in_kernel=ones_in_kernel,
        rank_ok=rank_ok,
        null_uniform_ok=null_uniform_ok,
    )


def exhaustive_scc_check(max_vertices: int = 8, n_graphs: int = 500, seed: int = 0) -> SccSweepReport:
    """Sample connected graphs and verify the identities the formalism rests on.

    Checks per graph: the two associativity routes of K @ v agree, sources
    sum to zero, the all-ones vector is in ker K exactly, rank equals
    |V| - 1, and the single null vector is uniform. A handful of degenerate
    fixed cases (single vertex, one link, a three-vertex path) always lead
    the sample.
    """
    if max_vertices > 8:
        raise ValueError("max_vertices capped at 8 to keep the sweep at desk scale")
    if max_vertices < 1:
        raise ValueError("max_vertices must be at least 1")
    rng = np.random.default_rng(seed)
    graphs: list[OrientedGraph] = [
        OrientedGraph(("v1",), ()),
        OrientedGraph(("v1", "v2"), (Link("e1", "v1", "v2"),)),
        OrientedGraph(
            ("v1", "v2", "v3"),
            (Link("e1", "v1", "v2"), Link("e2", "v2", "v3")),
        ),
    ]
    while len(graphs) < max(n_graphs, len(graphs)):
        n = int(rng.integers(2, max_vertices + 1)) if max_vertices >= 2 else 1
        graphs.append(random_connected_graph(rng, n))

    records = [_check_one_graph(i, g, rng) for i, g in enumerate(graphs)]
    failures = tuple(r for r in records if not r.ok)
    worst = max((r.scc_residual for r in records), default=0.0)
    return SccSweepReport(
        graphs_checked=len(records),
        all_pass=not failures,
        worst_scc_residual=worst,
        failures=failures,
    )
