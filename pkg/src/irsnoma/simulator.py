"""Monte Carlo outage engine with deterministic, order-free parallelism."""

from __future__ import annotations

import logging
import math
import os
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np
from scipy import stats

from irsnoma._types import (
    ConfigError,
    OutageEstimate,
    Scheme,
    SweepPoint,
    SweepResult,
    SystemConfig,
)
from irsnoma.analytics import analytic_approx, analytic_floor, analytic_outage
from irsnoma.channel import draw_batch
from irsnoma.control import check_feasible, codebook_for, get_handler
from irsnoma.linkmetrics import count_outages, sinr_from_gains
from irsnoma.numerics import RandomStream

logger = logging.getLogger(__name__)

DEFAULT_BLOCK_SIZE = 4096
THREADS_ENV = "IRSNOMA_THREADS"


def wilson_interval(
    failures: int, trials: int, confidence: float = 0.95,
) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return (0.0, 1.0)
    z = float(stats.norm.ppf(0.5 + confidence / 2.0))
    p_hat = failures / trials
    denominator = 1.0 + z * z / trials
    center = (p_hat + z * z / (2.0 * trials)) / denominator
    margin = z * math.sqrt(p_hat * (1.0 - p_hat) / trials + z * z / (4.0 * trials**2))
    margin /= denominator
    lower = max(0.0, min(p_hat, center - margin))
    upper = min(1.0, max(p_hat, center + margin))
    return (lower, upper)


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    if not raw:
        return 1
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if workers < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {workers}")
    return workers


def _count_block(
    template: SystemConfig,
    schemes: tuple[Scheme, ...],
    rhos: tuple[float, ...],
    served_beam: int,
    seed: int,
    block: int,
    size: int,
    block_size: int,
) -> np.ndarray:
    """Failure counts (schemes x rhos) for the first ``size`` trials of one block.

    The block is always drawn at full ``block_size`` so trial t maps to the
    same realization whatever the total trial count. Every scheme sees the
    same realizations.
    """
    stream = RandomStream(seed).child(block)
    batch = draw_batch(template, served_beam, stream, block_size).head(size)
    effective = batch.effective
    counts = np.zeros((len(schemes), len(rhos)), dtype=np.int64)
    for s, scheme in enumerate(schemes):
        gains = get_handler(scheme)(template, effective, served_beam)
        for r, rho in enumerate(rhos):
            sinr = sinr_from_gains(gains, served_beam, template.with_rho(rho)).max(axis=1)
            counts[s, r] = count_outages(sinr, template.rate_bpcu)
    return counts


class Simulator:
    """Monte Carlo outage estimator.

    Trials are grouped in fixed blocks; block b draws from
    ``RandomStream(seed, b)``. Blocks are independent, so the failure counts
    are identical for any worker count.
    """

    def __init__(
        self,
        *,
        workers: int | None = None,
        block_size: int = DEFAULT_BLOCK_SIZE,
        served_beam: int = 0,
        run_logger: Callable[[OutageEstimate], Any] | None = None,
    ):
        self.workers = workers if workers is not None else default_workers()
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if block_size < 1:
            raise ConfigError(f"block_size must be >= 1, got {block_size}")
        self.block_size = block_size
        self.served_beam = served_beam
        self._run_logger = run_logger

    def _counts(
        self,
        template: SystemConfig,
        schemes: tuple[Scheme, ...],
        rhos: tuple[float, ...],
        trials: int,
        seed: int,
    ) -> np.ndarray:
        if trials < 1:
            raise ConfigError(f"trials must be >= 1, got {trials}")
        if not 0 <= self.served_beam < template.K:
            raise ConfigError(f"served_beam must be in [0, {template.K}), got {self.served_beam}")
        for scheme in schemes:
            check_feasible(template, scheme)
        blocks = [
            (b, min(self.block_size, trials - b * self.block_size))
            for b in range(math.ceil(trials / self.block_size))
        ]

        def run(block: tuple[int, int]) -> np.ndarray:
            return _count_block(
                template, schemes, rhos, self.served_beam, seed, block[0], block[1],
                self.block_size,
            )

        total = np.zeros((len(schemes), len(rhos)), dtype=np.int64)
        if self.workers == 1 or len(blocks) == 1:
            for block in blocks:
                total += run(block)
        else:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                for counts in pool.map(run, blocks):
                    total += counts
        return total

    def _estimate(
        self, config: SystemConfig, scheme: Scheme, trials: int, seed: int, failures: int,
    ) -> OutageEstimate:
        ci_low, ci_high = wilson_interval(failures, trials)
        estimate = OutageEstimate(
            scheme=scheme,
            config=config,
            seed=seed,
            trials=trials,
            failures=failures,
            ci_low=ci_low,
            ci_high=ci_high,
        )
        if estimate.needs_more_trials:
            logger.warning(
                "%s at %.2f dB: only %d failures in %d trials; increase trials",
                scheme.value, config.snr_db, failures, trials,
            )
        if self._run_logger:
            self._run_logger(estimate)
        return estimate

    def estimate_outage(
        self, config: SystemConfig, scheme: Scheme, trials: int, seed: int,
    ) -> OutageEstimate:
        """Outage probability of one scheme at one configuration."""
        counts = self._counts(config.with_rho(1.0), (scheme,), (config.rho,), trials, seed)
        return self._estimate(config, scheme, trials, seed, int(counts[0, 0]))

    def sweep(
        self,
        template: SystemConfig,
        schemes: Iterable[Scheme],
        snr_db: Sequence[float],
        trials: int,
        seed: int,
    ) -> SweepResult:
        """Estimates for every (scheme, SNR) on common channel draws.

        Each entry equals ``estimate_outage`` at that point with the same seed.
        On-off closed forms are attached where they apply.
        """
        schemes = tuple(dict.fromkeys(schemes))
        grid = [float(db) for db in snr_db]
        if not grid:
            raise ConfigError("SNR grid is empty")
        if not schemes:
            raise ConfigError("at least one scheme is required")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("SNR grid must be strictly increasing")
        result = SweepResult(config=template, seed=seed, trials=trials)
        configs = [template.with_snr_db(db) for db in grid]
        logger.info(
            "sweep N=%d Q=%d K=%d: %d schemes x %d points x %d trials",
            template.N, template.Q, template.K, len(schemes), len(grid), trials,
        )
        counts = self._counts(
            template.with_rho(1.0), schemes, tuple(c.rho for c in configs), trials, seed
        )
        for r, (db, config) in enumerate(zip(grid, configs)):
            estimates = {
                scheme: self._estimate(config, scheme, trials, seed, int(counts[s, r]))
                for s, scheme in enumerate(schemes)
            }
            result.points.append(
                SweepPoint(
                    rho_db=db,
                    estimates=estimates,
                    analytic=analytic_outage(config),
                    approx=analytic_approx(config),
                    floor=analytic_floor(config),
                )
            )
        return result

    def branch_correlation(
        self, config: SystemConfig, scheme: Scheme, trials: int, seed: int,
    ) -> np.ndarray:
        """Empirical correlation matrix of the codebook gains |c_l^H D h_k|^2."""
        book = codebook_for(config, scheme)
        if trials < 2:
            raise ConfigError("correlation needs at least 2 trials")
        chunks = []
        for b in range(math.ceil(trials / self.block_size)):
            size = min(self.block_size, trials - b * self.block_size)
            batch = draw_batch(
                config, self.served_beam, RandomStream(seed).child(b), self.block_size
            ).head(size)
            target = batch.effective[:, :, self.served_beam]
            chunks.append(np.abs(target @ book.matrix.conj()) ** 2)
        gains = np.concatenate(chunks)
        return np.atleast_2d(np.corrcoef(gains, rowvar=False))


def estimate_outage(
    config: SystemConfig, scheme: Scheme, trials: int, seed: int, **kwargs: Any,
) -> OutageEstimate:
    return Simulator(**kwargs).estimate_outage(config, scheme, trials, seed)


def sweep(
    template: SystemConfig,
    schemes: Iterable[Scheme],
    snr_db: Sequence[float],
    trials: int,
    seed: int,
    **kwargs: Any,
) -> SweepResult:
    return Simulator(**kwargs).sweep(template, schemes, snr_db, trials, seed)
