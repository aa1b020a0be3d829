"""Discrete Euclidean action matrix for two linearly coupled oscillators.

Discretizing the Euclidean action of two oscillators of mass m, diagonal
spring constant k, and coupling k12 on n_time slices of width dt gives a
block matrix [[T, C], [C, T]]: T is m/dt times the path-graph Laplacian
plus k*dt on the diagonal (so endpoints carry m/dt + k*dt, interior slices
2m/dt + k*dt), and C = k12*dt*I couples equal-time slices. With unit
parameters this is exactly the ladder-graph difference matrix, which is the
structural bridge between the oscillator action and the graph Laplacian.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scc_core import DifferenceMatrix


@dataclass(frozen=True)
class OscillatorParams:
    """Physical constants of the two-oscillator chain.

    The coupling is non-positive because it arises as -k3 for a middle
    spring k3 >= 0, and realizability of the three-spring picture requires
    k + k12 >= 0 (k = k1 + k3 with k1 >= 0). k = k12 = 0 is admitted as the
    free-particle limit.
    """

    m: float
    k: float
    k12: float
    dt: float
    n_time: int = 3

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError("mass m must be positive")
        if not self.dt > 0:
            raise ValueError("time step dt must be positive")
        if self.k < 0:
            raise ValueError("spring constant k must be nonnegative")
        if self.k12 > 0:
            raise ValueError("coupling k12 must be nonpositive (it is -k3 for a middle spring)")
        if self.k + self.k12 < 0:
            raise ValueError("realizability requires k + k12 >= 0")
        if self.n_time < 1:
            raise ValueError("need at least one time slice")


@dataclass(frozen=True, eq=False)
class OscillatorMatrix:
    matrix: np.ndarray
    params: OscillatorParams

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def potential_energy(params: OscillatorParams, q1: float, q2: float) -> float:
    """Coupled-oscillator potential k q1^2 / 2 + k q2^2 / 2 + k12 q1 q2."""
    return 0.5 * params.k * q1**2 + 0.5 * params.k * q2**2 + params.k12 * q1 * q2


def build_oscillator_K(params: OscillatorParams) -> OscillatorMatrix:
    """Assemble the 2 n_time x 2 n_time discrete action matrix [[T, C], [C, T]]."""
    nt = params.n_time
    m_over_dt = params.m / params.dt
    # path-graph Laplacian carries the kinetic differences; n_time = 1 has none
    path = np.zeros((nt, nt))
    for i in range(nt - 1):
        path[i, i] += 1.0
        path[i + 1, i + 1] += 1.0
        path[i, i + 1] -= 1.0
        path[i + 1, i] -= 1.0
    block_t = m_over_dt * path + params.k * params.dt * np.eye(nt)
    block_c = params.k12 * params.dt * np.eye(nt)
    full = np.block([[block_t, block_c], [block_c, block_t]])
    return OscillatorMatrix(full, params)


@dataclass(frozen=True)
class PatternMatchReport:
    """Structural comparison of an oscillator matrix with a difference matrix."""

    pattern_match: bool
    exact_equal: bool
    mismatches: tuple[tuple[int, int], ...]

    def as_dict(self) -> dict:
        return {
            "pattern_match": self.pattern_match,
            "exact_equal": self.exact_equal,
            "mismatches": [list(pos) for pos in self.mismatches],
        }


def pattern_match_laplacian(K_osc: OscillatorMatrix, K: DifferenceMatrix) -> PatternMatchReport:
    """Compare sign and sparsity patterns entry by entry.

    Matches require zero exactly where the other matrix is zero, positive
    diagonal in both, and negative off-diagonal entries in the same
    positions. Exact numerical equality is reported separately.
    """
    a = K_osc.matrix
    b = K.matrix
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    mismatches = []
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            sa, sb = np.sign(a[i, j]), np.sign(b[i, j])
            if sa != sb:
                mismatches.append((i, j))
            elif i == j and sa <= 0:
                mismatches.append((i, j))
            elif i != j and sa > 0:
                mismatches.append((i, j))
    return PatternMatchReport(
        pattern_match=not mismatches,
        exact_equal=bool(np.array_equal(a, b)),
        mismatches=tuple(mismatches),
    )
