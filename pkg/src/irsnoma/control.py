"""Reflection control: ideal zero-forcing, DFT codebook search, on-off selection."""

from __future__ import annotations

import math
from collections.abc import Callable
from functools import lru_cache

import numpy as np

from irsnoma._types import (
    ChannelRealization,
    Codebook,
    ConfigError,
    DegenerateChannelError,
    InfeasibleSchemeError,
    ReflectVector,
    Scheme,
    SystemConfig,
)
from irsnoma.linkmetrics import sinr_from_gains
from irsnoma.numerics import RANK_RCOND, null_space

# ---------------------------------------------------------------------------
# Scheme handler registry
# ---------------------------------------------------------------------------

# (config, effective (B, N, K), served_beam) -> candidate gains (B, L, K)
GainHandler = Callable[[SystemConfig, np.ndarray, int], np.ndarray]
_SCHEME_REGISTRY: dict[Scheme, GainHandler] = {}


def scheme_handler(scheme: Scheme) -> Callable[[GainHandler], GainHandler]:
    """Register a function as the batch gain handler for a scheme."""

    def decorator(fn: GainHandler) -> GainHandler:
        _SCHEME_REGISTRY[scheme] = fn
        return fn

    return decorator


def get_handler(scheme: Scheme) -> GainHandler:
    """Look up the batch gain handler for a scheme."""
    handler = _SCHEME_REGISTRY.get(scheme)
    if handler is None:
        raise ValueError(
            f"Unknown scheme: {scheme!r}. Valid: {sorted(s.value for s in _SCHEME_REGISTRY)}"
        )
    return handler


def check_feasible(config: SystemConfig, scheme: Scheme) -> None:
    """Raise InfeasibleSchemeError when the scheme cannot run on this config."""
    if scheme is Scheme.IDEAL and config.N < config.K:
        raise InfeasibleSchemeError(
            f"ideal zero-forcing needs N >= K, got N={config.N}, K={config.K}"
        )


# ---------------------------------------------------------------------------
# Codebooks
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def build_dft_codebook(N: int) -> Codebook:
    """Columns of the unit-norm N-point DFT matrix: entry (n, p) = exp(-j2pi np/N)/sqrt(N)."""
    if N < 1:
        raise ConfigError(f"N must be >= 1, got {N}")
    n = np.arange(N)
    matrix = np.exp(-2j * np.pi * np.outer(n, n) / N) / math.sqrt(N)
    return Codebook(Scheme.DFT, matrix)


@lru_cache(maxsize=64)
def build_onoff_codebook(N: int, P: int, Q: int) -> Codebook:
    """P block vectors: v_p is 1/sqrt(Q) on its Q consecutive elements, 0 elsewhere."""
    if P < 1 or Q < 1 or N != P * Q:
        raise ConfigError(f"on-off codebook needs N = P*Q, got N={N}, P={P}, Q={Q}")
    matrix = np.kron(np.eye(P), np.ones((Q, 1))) / math.sqrt(Q)
    return Codebook(Scheme.ONOFF, matrix, P=P, Q=Q)


def codebook_for(config: SystemConfig, scheme: Scheme) -> Codebook:
    if scheme is Scheme.DFT:
        return build_dft_codebook(config.N)
    if scheme is Scheme.ONOFF:
        return build_onoff_codebook(config.N, config.P, config.Q)
    raise InfeasibleSchemeError(f"scheme '{scheme.value}' has no codebook")


# ---------------------------------------------------------------------------
# Single-realization designs
# ---------------------------------------------------------------------------


def ideal_theta(real: ChannelRealization) -> ReflectVector:
    """Zero-forcing theta maximizing |theta^H D h_k| over the null space of D h_i, i != k."""
    if real.N < real.K:
        raise InfeasibleSchemeError(
            f"ideal zero-forcing needs N >= K, got N={real.N}, K={real.K}"
        )
    effective = real.effective
    target = effective[:, real.served_beam]
    basis = null_space(np.delete(effective, real.served_beam, axis=1))
    coefficients = basis.conj().T @ target
    norm = float(np.linalg.norm(coefficients))
    if norm == 0.0:
        raise DegenerateChannelError("target channel lies in the interference span")
    return ReflectVector(basis @ (coefficients / norm), Scheme.IDEAL)


def select_theta(
    book: Codebook, real: ChannelRealization, config: SystemConfig,
) -> ReflectVector:
    """Codebook member with the largest far-user SINR; ties go to the lowest index."""
    if len(book) == 0:
        raise ConfigError("codebook is empty")
    gains = np.abs(book.matrix.conj().T @ real.effective) ** 2
    sinr = sinr_from_gains(gains, real.served_beam, config)
    return book[int(np.argmax(sinr))]


# ---------------------------------------------------------------------------
# Batch designs
# ---------------------------------------------------------------------------


def ideal_theta_batch(effective: np.ndarray, served_beam: int) -> np.ndarray:
    """(B, N) zero-forcing vectors for a (B, N, K) stack of D h_i columns."""
    _, n, k = effective.shape
    if n < k:
        raise InfeasibleSchemeError(f"ideal zero-forcing needs N >= K, got N={n}, K={k}")
    target = effective[:, :, served_beam]
    if k == 1:
        projected = target.copy()
    else:
        others = np.delete(effective, served_beam, axis=2)
        u, s, _ = np.linalg.svd(others, full_matrices=True)
        basis = u[:, :, k - 1:]
        coefficients = basis.conj().transpose(0, 2, 1) @ target[:, :, None]
        projected = (basis @ coefficients)[:, :, 0]
        rank = np.sum(s > RANK_RCOND * s[:, :1], axis=1)
        for row in np.flatnonzero(rank < k - 1):
            v = null_space(others[row])
            projected[row] = v @ (v.conj().T @ target[row])
    norms = np.linalg.norm(projected, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateChannelError("target channel lies in the interference span")
    return projected / norms[:, None]


@scheme_handler(Scheme.IDEAL)
def ideal_gains(config: SystemConfig, effective: np.ndarray, served_beam: int) -> np.ndarray:
    check_feasible(config, Scheme.IDEAL)
    theta = ideal_theta_batch(effective, served_beam)
    projection = theta.conj()[:, None, :] @ effective
    return np.abs(projection) ** 2


def _codebook_gains(book: Codebook, effective: np.ndarray) -> np.ndarray:
    return np.abs(book.matrix.conj().T @ effective) ** 2


@scheme_handler(Scheme.DFT)
def dft_gains(config: SystemConfig, effective: np.ndarray, served_beam: int) -> np.ndarray:
    return _codebook_gains(build_dft_codebook(config.N), effective)


@scheme_handler(Scheme.ONOFF)
def onoff_gains(config: SystemConfig, effective: np.ndarray, served_beam: int) -> np.ndarray:
    return _codebook_gains(build_onoff_codebook(config.N, config.P, config.Q), effective)
