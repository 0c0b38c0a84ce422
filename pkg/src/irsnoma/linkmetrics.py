"""Far-user SINR and the outage predicate."""

from __future__ import annotations

import math

import numpy as np

from irsnoma._types import (
    ChannelRealization,
    ConfigError,
    DomainError,
    ReflectVector,
    SinrBreakdown,
    SystemConfig,
)


def sinr_from_gains(gains: np.ndarray, served_beam: int, config: SystemConfig) -> np.ndarray:
    """SINR from per-beam gains |theta^H D h_i|^2 stacked on the last axis."""
    gains = np.asarray(gains, dtype=np.float64)
    useful = gains[..., served_beam]
    inter = np.delete(gains, served_beam, axis=-1).sum(axis=-1)
    return useful * config.alpha1_sq / (useful * config.alpha2_sq + inter + 1.0 / config.rho)


def sinr_far(
    theta: ReflectVector, real: ChannelRealization, config: SystemConfig,
) -> SinrBreakdown:
    """Far-user SINR with useful, self, inter-pair and noise terms split out."""
    if len(theta) != real.N:
        raise ConfigError(f"theta has {len(theta)} entries, channel has N={real.N}")
    gains = np.abs(theta.values.conj() @ real.effective) ** 2
    k = real.served_beam
    signal = float(gains[k])
    return SinrBreakdown(
        useful=signal * config.alpha1_sq,
        self_interference=signal * config.alpha2_sq,
        inter_pair=float(np.delete(gains, k).sum()),
        noise=1.0 / config.rho,
    )


def outage_threshold(rate_bpcu: float) -> float:
    return 2.0**rate_bpcu - 1.0


def is_outage(sinr: float, rate_bpcu: float) -> bool:
    """True iff log2(1 + sinr) < rate, i.e. sinr < 2^rate - 1 (strict)."""
    if math.isnan(sinr) or sinr < 0:
        raise DomainError(f"SINR must be non-negative, got {sinr!r}")
    return sinr < outage_threshold(rate_bpcu)


def count_outages(sinr: np.ndarray, rate_bpcu: float) -> int:
    return int(np.count_nonzero(np.asarray(sinr) < outage_threshold(rate_bpcu)))
