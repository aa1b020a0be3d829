"""Row-space-restricted Euclidean partition function and outcome probabilities.

Everything here works in an eigenbasis of the difference matrix K. Writing
a_i for the nonzero eigenvalues and Jhat_i for the projections of the source
onto the matching orthonormal eigenvectors, the restricted partition
function is

    log Z = 1/2 [ r log(2 pi) - sum_i log a_i ] + sum_i Jhat_i^2 / (2 a_i)

with r the row-space dimension. The integral is taken over row-space
directions only; a source with a component along a null (gauge) direction is
rejected outright instead of contributing an infinite gauge-volume factor.

Scale convention: the engine evaluates everything in natural units of the K
it is handed and applies the single divisor ``hbar_beta`` only when
reporting the exponent Phi. With K built at beta = 1 this makes Phi equal
Jhat_i^2 summed over 2 * a_i * hbar_beta, where a_i are the eigenvalues of
d1 @ d1.T; callers who scale K by beta should fold that scale into
hbar_beta themselves if they want the beta-free reading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NullModeError, RowSpaceError, SingularMatrixError
from .scc_core import NULL_EIGENVALUE_RTOL, DifferenceMatrix, as_source_vector

ROW_SPACE_RTOL = 1e-9
SYMMETRY_RTOL = 1e-12


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Eigenvalues (ascending) and orthonormal eigenvectors of K.

    The first ``null_count`` modes are classified as zero; row-space modes
    are the remaining indices.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    null_count: int

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", _frozen(self.eigenvalues))
        object.__setattr__(self, "eigenvectors", _frozen(self.eigenvectors))

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def row_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[self.null_count:]

    @property
    def row_eigenvectors(self) -> np.ndarray:
        return self.eigenvectors[:, self.null_count:]

    @property
    def null_eigenvectors(self) -> np.ndarray:
        return self.eigenvectors[:, : self.null_count]


def spectral_decompose(K: DifferenceMatrix) -> SpectralData:
    """Full symmetric eigendecomposition of K with null-mode classification."""
    mat = K.matrix
    scale = float(np.max(np.abs(mat), initial=0.0))
    if float(np.max(np.abs(mat - mat.T), initial=0.0)) > SYMMETRY_RTOL * (1.0 + scale):
        raise ValueError("difference matrix must be symmetric")
    eigenvalues, eigenvectors = np.linalg.eigh(np.array(mat))
    threshold = NULL_EIGENVALUE_RTOL * float(np.max(np.abs(eigenvalues), initial=0.0))
    null_count = int(np.sum(eigenvalues <= threshold))
    return SpectralData(eigenvalues, eigenvectors, null_count)


def _check_row_space(sd: SpectralData, j: np.ndarray) -> None:
    if sd.null_count == 0:
        return
    null_proj = sd.null_eigenvectors.T @ j
    worst = float(np.max(np.abs(null_proj), initial=0.0))
    if worst > ROW_SPACE_RTOL * float(np.linalg.norm(j)):
        raise RowSpaceError(
            "source vector has a null-space (gauge) component of magnitude "
            f"{worst:.3e}; the restricted partition function is defined only "
            "for sources in the row space of K"
        )


@dataclass(frozen=True, eq=False)
class AmplitudeResult:
    """Partition-function value and its per-mode decomposition.

    ``exponent`` is sum Jhat_i^2 / (2 a_i) in the natural units of K;
    ``phi`` divides it by ``hbar_beta`` per the module's scale convention.
    """

    log_z: float
    projections: np.ndarray
    eigenvalues_used: np.ndarray
    exponent: float
    hbar_beta: float
    null_count: int

    def __post_init__(self):
        object.__setattr__(self, "projections", _frozen(self.projections))
        object.__setattr__(self, "eigenvalues_used", _frozen(self.eigenvalues_used))

    @property
    def phi(self) -> float:
        return self.exponent / self.hbar_beta


def partition_function(K: DifferenceMatrix, J, hbar_beta: float = 1.0) -> AmplitudeResult:
    """Row-space-restricted Gaussian partition function for the pair (K, J).

    Raises RowSpaceError if J has a null-space component; that rejection
    replaces the usual discarding of infinite gauge-group volume.
    """
    if not hbar_beta > 0:
        raise ValueError("hbar_beta must be positive")
    sd = spectral_decompose(K)
    j = as_source_vector(J)
    if j.shape != (sd.n,):
        raise ValueError(f"source vector has length {j.shape}, expected {sd.n}")
    _check_row_space(sd, j)
    a = sd.row_eigenvalues
    jhat = sd.row_eigenvectors.T @ j
    exponent = float(np.sum(jhat**2 / (2.0 * a))) if a.size else 0.0
    log_z = 0.5 * (a.size * math.log(2.0 * math.pi) - float(np.sum(np.log(a)))) + exponent
    return AmplitudeResult(
        log_z=log_z,
        projections=jhat,
        eigenvalues_used=a,
        exponent=exponent,
        hbar_beta=hbar_beta,
        null_count=sd.null_count,
    )


def full_space_log_z(K: DifferenceMatrix) -> float:
    """Unrestricted Gaussian normalization log sqrt((2 pi)^N / det K).

    For any difference matrix built from a graph this is undefined (det K
    is zero because of the gauge null space); the error message says so.
    No regularization is attempted -- restriction to the row space is the
    supported route.
    """
    sign, logdet = np.linalg.slogdet(K.matrix)
    eigenvalues = np.linalg.eigvalsh(K.matrix)
    threshold = NULL_EIGENVALUE_RTOL * float(np.max(np.abs(eigenvalues), initial=0.0))
    if sign <= 0 or np.any(eigenvalues <= threshold):
        raise SingularMatrixError(
            "det K = 0 (gauge null space present): the full-space partition "
            "function is undefined; use the row-space-restricted form"
        )
    return 0.5 * (K.n * math.log(2.0 * math.pi) - logdet)


@dataclass(frozen=True)
class ModeProbability:
    """Gaussian outcome distribution of a single row-space mode.

    The density over the outcome value q0 is
    sqrt(a_k / (2 pi hbar_beta)) * exp([-q0^2 a_k / 2 + Jhat_k q0
    - Jhat_k^2 / (2 a_k)] / hbar_beta), a normal law with mean
    Jhat_k / a_k and variance hbar_beta / a_k.
    """

    mode_index: int
    a_k: float
    jhat_k: float
    hbar_beta: float = 1.0

    @property
    def mean(self) -> float:
        return self.jhat_k / self.a_k

    @property
    def variance(self) -> float:
        return self.hbar_beta / self.a_k

    def density(self, q0):
        q0 = np.asarray(q0, dtype=float)
        exponent = (
            -0.5 * q0**2 * self.a_k + self.jhat_k * q0 - self.jhat_k**2 / (2.0 * self.a_k)
        ) / self.hbar_beta
        value = np.sqrt(self.a_k / (2.0 * math.pi * self.hbar_beta)) * np.exp(exponent)
        return float(value) if value.ndim == 0 else value


def mode_distribution(sd: SpectralData, J, k: int, hbar_beta: float = 1.0) -> ModeProbability:
    """Outcome distribution for eigenmode k (ascending eigenvalue order).

    Null (gauge) modes carry no distribution; asking for one raises
    NullModeError.
    """
    if not 0 <= k < sd.n:
        raise ValueError(f"mode index {k} out of range for {sd.n} modes")
    if k < sd.null_count:
        raise NullModeError(
            f"mode {k} is a zero-eigenvalue (gauge) mode and has no outcome distribution"
        )
    j = as_source_vector(J)
    jhat_k = float(sd.eigenvectors[:, k] @ j)
    return ModeProbability(
        mode_index=k,
        a_k=float(sd.eigenvalues[k]),
        jhat_k=jhat_k,
        hbar_beta=hbar_beta,
    )


def mode_probability_density(sd: SpectralData, J, k: int, q0, hbar_beta: float = 1.0):
    """Density of measuring outcome q0 on row-space mode k."""
    return mode_distribution(sd, J, k, hbar_beta).density(q0)


def most_probable_field(K: DifferenceMatrix, J) -> np.ndarray:
    """Minimum-norm solution of K @ Q0 = J, i.e. sum (Jhat_i / a_i) |i>.

    Q0 is orthogonal to the null space by construction, so the gauge is
    fixed with ones @ Q0 = 0; adding any constant shift leaves the action
    exponent unchanged.
    """
    sd = spectral_decompose(K)
    j = as_source_vector(J)
    if j.shape != (sd.n,):
        raise ValueError(f"source vector has length {j.shape}, expected {sd.n}")
    _check_row_space(sd, j)
    a = sd.row_eigenvalues
    vectors = sd.row_eigenvectors
    if a.size == 0:
        return np.zeros(sd.n)
    return vectors @ ((vectors.T @ j) / a)
