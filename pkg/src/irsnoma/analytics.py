"""Closed-form outage of on-off IRS-NOMA, high-SNR approximations, diversity slopes.

Single-pair (K = 1) results hold for any block size Q; multi-pair results
(K >= 2) are available for Q = 1 only. Every evaluator returns exactly 1 when
tau = alpha1^2 - eps * alpha2^2 <= 0, because the SINR can then never reach
the threshold.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from scipy import special

from irsnoma._types import (
    AnalyticParams,
    DomainError,
    InfeasibleSchemeError,
    OutOfRegimeError,
    SystemConfig,
)
from irsnoma.numerics import bessel_k_int, gamma_int


def analytic_params(config: SystemConfig) -> AnalyticParams:
    epsilon = config.epsilon
    tau = config.tau
    xi = config.Q * epsilon / (config.rho * tau) if tau > 0 else None
    return AnalyticParams(epsilon=epsilon, tau=tau, xi=xi)


def _scaled_bessel_term(order: int, x: float) -> float:
    """2 x^(order/2) K_order(2 sqrt(x)) / Gamma(order), evaluated in log space."""
    z = 2.0 * math.sqrt(x)
    log_term = (
        math.log(2.0)
        + 0.5 * order * math.log(x)
        + math.log(special.kve(order, z))
        - z
        - math.lgamma(order)
    )
    return math.exp(log_term)


# ---------------------------------------------------------------------------
# Product-Gaussian branch statistic
# ---------------------------------------------------------------------------


def branch_pdf(Q: int, x: float) -> float:
    """Density of Q |v_p^H D h_k|^2: 2 x^((Q-1)/2) K_{Q-1}(2 sqrt(x)) / Gamma(Q)."""
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    if x < 0:
        raise DomainError(f"x must be >= 0, got {x}")
    if x == 0:
        if Q == 1:
            raise DomainError("the Q = 1 density diverges at x = 0")
        return 1.0 / (Q - 1)
    return 2.0 * x ** ((Q - 1) / 2.0) * bessel_k_int(Q - 1, 2.0 * math.sqrt(x)) / gamma_int(Q)


def branch_cdf(Q: int, x: float) -> float:
    """P(Q |v_p^H D h_k|^2 < x) = 1 - 2 x^(Q/2) K_Q(2 sqrt(x)) / Gamma(Q)."""
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    return min(1.0, max(0.0, 1.0 - _scaled_bessel_term(Q, x)))


# ---------------------------------------------------------------------------
# Single pair
# ---------------------------------------------------------------------------


def lemma1_branch(config: SystemConfig) -> float:
    """Outage of one on-off branch for K = 1."""
    params = analytic_params(config)
    if not params.feasible:
        return 1.0
    return branch_cdf(config.Q, params.xi)


def lemma1_exact(config: SystemConfig) -> float:
    """Single-pair on-off outage: the per-branch value raised to the P branches."""
    return lemma1_branch(config) ** config.P


def lemma1_approx(config: SystemConfig) -> float:
    """High-SNR form: xi^N (-ln xi)^N for Q = 1, xi^P / (Q-1)^P for Q >= 2."""
    params = analytic_params(config)
    if not params.feasible:
        return 1.0
    xi = params.xi
    if config.Q == 1:
        if xi >= 1.0:
            raise OutOfRegimeError(f"xi={xi:.4g} >= 1: the Q = 1 approximation needs xi -> 0")
        return (xi * -math.log(xi)) ** config.N
    return (xi / (config.Q - 1)) ** config.P


# ---------------------------------------------------------------------------
# Multiple pairs, Q = 1
# ---------------------------------------------------------------------------


def _check_multi_pair(config: SystemConfig) -> None:
    if config.K < 2 or config.Q != 1:
        raise InfeasibleSchemeError(
            f"multi-pair closed form needs K >= 2 and Q = 1, got K={config.K}, Q={config.Q}"
        )


def lemma2_branch(config: SystemConfig) -> float:
    """Outage of one on-off element with K - 1 interfering beams."""
    _check_multi_pair(config)
    params = analytic_params(config)
    if not params.feasible:
        return 1.0
    c = params.epsilon / (config.rho * params.tau)
    interference = (1.0 + params.epsilon / params.tau) ** (config.K - 1)
    return min(1.0, max(0.0, 1.0 - _scaled_bessel_term(1, c) / interference))


def lemma2_exact(config: SystemConfig) -> float:
    return lemma2_branch(config) ** config.N


def lemma2_floor(config: SystemConfig) -> float:
    """Limit of the multi-pair outage as rho -> infinity."""
    _check_multi_pair(config)
    params = analytic_params(config)
    if not params.feasible:
        return 1.0
    return (1.0 - (1.0 + params.epsilon / params.tau) ** (1 - config.K)) ** config.N


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def analytic_outage(config: SystemConfig) -> float | None:
    """Exact on-off outage where a closed form exists, else None."""
    if config.K == 1:
        return lemma1_exact(config)
    if config.Q == 1:
        return lemma2_exact(config)
    return None


def analytic_approx(config: SystemConfig) -> float | None:
    """High-SNR approximation where defined and in regime, else None."""
    try:
        if config.K == 1:
            return lemma1_approx(config)
        if config.Q == 1:
            return lemma2_floor(config)
    except OutOfRegimeError:
        return None
    return None


def analytic_floor(config: SystemConfig) -> float | None:
    if config.K >= 2 and config.Q == 1:
        return lemma2_floor(config)
    return None


def diversity_slope(
    outage_fn: Callable[[float], float],
    rho_low_db: float,
    rho_high_db: float,
    points: int = 11,
) -> float:
    """Least-squares slope of -log10(P_out) against log10(rho) over a dB grid.

    ``outage_fn`` takes the linear SNR.
    """
    if rho_high_db <= rho_low_db:
        raise DomainError("rho_high_db must exceed rho_low_db")
    if points < 5:
        raise DomainError(f"need at least 5 grid points, got {points}")
    grid_db = np.linspace(rho_low_db, rho_high_db, points)
    outage = np.array([outage_fn(10.0 ** (db / 10.0)) for db in grid_db])
    if np.any(~np.isfinite(outage)) or np.any(outage <= 0):
        raise DomainError("outage must be positive over the fitting range")
    slope, _ = np.polyfit(grid_db / 10.0, -np.log10(outage), 1)
    return float(slope)
