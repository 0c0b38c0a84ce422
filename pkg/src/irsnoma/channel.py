"""Channel draws: beams, BS->IRS matrix, IRS->far-user vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from irsnoma._types import ChannelRealization, ConfigError, SystemConfig
from irsnoma.numerics import RandomSource, as_generator, orthonormal_columns, sample_cn_matrix


@dataclass(frozen=True, eq=False)
class ChannelBatch:
    """A stack of independent realizations sharing one configuration.

    Shapes: ``W`` (B, M, K), ``G`` (B, N, M), ``h_far`` (B, N).
    """

    W: np.ndarray
    G: np.ndarray
    h_far: np.ndarray
    served_beam: int = 0

    def __len__(self) -> int:
        return self.h_far.shape[0]

    @property
    def H_eff(self) -> np.ndarray:
        """(B, N, K): column i of each slice is h_i = G w_i."""
        return self.G @ self.W

    @property
    def effective(self) -> np.ndarray:
        """(B, N, K): column i of each slice is D h_i."""
        return self.h_far.conj()[:, :, None] * self.H_eff

    def head(self, count: int) -> ChannelBatch:
        return ChannelBatch(
            self.W[:count], self.G[:count], self.h_far[:count], self.served_beam
        )

    def realization(self, index: int) -> ChannelRealization:
        return ChannelRealization(
            W=self.W[index],
            G=self.G[index],
            h_far=self.h_far[index],
            served_beam=self.served_beam,
        )


def draw_batch(
    config: SystemConfig, served_beam: int, stream: RandomSource, size: int,
) -> ChannelBatch:
    """Draw ``size`` realizations. W first, then G, then h_far, from one generator."""
    if not 0 <= served_beam < config.K:
        raise ConfigError(f"served_beam must be in [0, {config.K}), got {served_beam}")
    if size < 1:
        raise ConfigError(f"batch size must be >= 1, got {size}")
    rng = as_generator(stream)
    w = orthonormal_columns(config.M, config.K, rng, size=size)
    g = sample_cn_matrix(config.N, config.M, rng, size=size)
    h_far = sample_cn_matrix(config.N, 1, rng, size=size)[:, :, 0]
    return ChannelBatch(w, g, h_far, served_beam)


def draw_realization(
    config: SystemConfig, served_beam: int, stream: RandomSource,
) -> ChannelRealization:
    """One realization; identical to row 0 of ``draw_batch(..., size=1)``."""
    return draw_batch(config, served_beam, stream, 1).realization(0)
