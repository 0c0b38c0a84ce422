"""Numerical kernel: Bessel/gamma helpers, complex Gaussian draws, orthonormal bases."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy import special

from irsnoma._types import ConfigError, DomainError

# Singular values below RANK_RCOND * largest count as zero.
RANK_RCOND = 1e-10


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def bessel_k_int(n: int, z: float) -> float:
    """Modified Bessel function of the second kind K_n(z), integer order n >= 0."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(f"Bessel order must be a non-negative integer, got {n!r}")
    z = float(z)
    if not math.isfinite(z) or z <= 0.0:
        raise DomainError(f"K_n(z) needs finite z > 0, got {z!r}")
    return float(special.kv(int(n), z))


def gamma_int(n: int) -> float:
    """Gamma(n) = (n-1)!; exact for n <= 21, where (n-1)! fits a double exactly."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n <= 0:
        raise DomainError(f"gamma_int needs a positive integer, got {n!r}")
    if n <= 21:
        return float(math.factorial(int(n) - 1))
    try:
        return math.gamma(int(n))
    except OverflowError:
        return math.inf


# ---------------------------------------------------------------------------
# Random streams
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RandomStream:
    """Seedable, splittable source: (seed, index) names one Philox stream.

    Streams with distinct indices come from independent SeedSequence
    children, so trial blocks can be drawn in any order or in parallel.
    """

    seed: int
    index: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.index < 0:
            raise ConfigError(f"stream index must be >= 0, got {self.index}")

    def generator(self) -> np.random.Generator:
        sequence = np.random.SeedSequence(int(self.seed), spawn_key=(int(self.index),))
        return np.random.Generator(np.random.Philox(sequence))

    def child(self, index: int) -> RandomStream:
        return RandomStream(self.seed, index)


RandomSource = RandomStream | np.random.Generator


def as_generator(source: RandomSource) -> np.random.Generator:
    if isinstance(source, RandomStream):
        return source.generator()
    return source


def _check_dims(**dims: int) -> None:
    for name, value in dims.items():
        if value < 1:
            raise ConfigError(f"{name} must be >= 1, got {value}")


def sample_cn_matrix(
    rows: int, cols: int, stream: RandomSource, *, size: int | None = None,
) -> np.ndarray:
    """I.i.d. CN(0, 1) entries: real and imaginary parts each have variance 1/2.

    With ``size`` the result is a stack of shape (size, rows, cols).
    """
    _check_dims(rows=rows, cols=cols)
    shape = (rows, cols) if size is None else (size, rows, cols)
    rng = as_generator(stream)
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return (real + 1j * imag) / math.sqrt(2.0)


def orthonormal_columns(
    M: int, K: int, stream: RandomSource, *, size: int | None = None,
) -> np.ndarray:
    """M x K matrix with orthonormal columns, Haar-distributed.

    Orthonormalizes a CN draw by QR and rotates each column by the phase of
    R's diagonal, which makes the distribution invariant under left unitary
    rotation.
    """
    _check_dims(M=M, K=K)
    if K > M:
        raise ConfigError(f"cannot build {K} orthonormal columns in dimension {M}")
    draw = sample_cn_matrix(M, K, stream, size=size)
    q, r = np.linalg.qr(draw)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phases = diag / np.where(np.abs(diag) > 0, np.abs(diag), 1.0)
    return q * phases[..., None, :]


def null_space(a: np.ndarray, rcond: float = RANK_RCOND) -> np.ndarray:
    """Orthonormal V with A^H V = 0, for the columns of an N x J matrix A.

    J = 0 (an empty constraint set) returns the N x N identity.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 1:
        a = a[:, None]
    n, j = a.shape
    if n < 1:
        raise ConfigError("null_space needs at least one row")
    if j == 0:
        return np.eye(n, dtype=np.complex128)
    return scipy.linalg.null_space(a.conj().T, rcond=rcond)
