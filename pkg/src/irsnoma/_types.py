"""Core types for irsnoma: IRS-assisted NOMA link simulation and outage analytics."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Any

import numpy as np

ALPHA_TOLERANCE = 1e-12
ORTHONORMAL_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-9
RARE_EVENT_FLOOR = 50


class Scheme(Enum):
    IDEAL = "ideal"
    DFT = "dft"
    ONOFF = "onoff"


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------


class IrsNomaError(Exception):
    """Base class for all irsnoma errors."""


class ConfigError(IrsNomaError, ValueError):
    """A configuration violates its invariants."""


class SpecError(ConfigError):
    """An experiment file or override is invalid, with its location."""

    def __init__(self, message: str, *, source: str = "", line: int | None = None):
        self.source = source
        self.line = line
        self.reason = message
        if source and line is not None:
            where = f"{source}:{line}: "
        elif source:
            where = f"{source}: "
        else:
            where = ""
        super().__init__(f"{where}{message}")


class DomainError(IrsNomaError, ValueError):
    """A numeric routine was called outside its mathematical domain."""


class InfeasibleSchemeError(IrsNomaError):
    """A scheme or closed form does not apply to the configuration."""


class DegenerateChannelError(IrsNomaError):
    """The projected target channel vanished (a probability-zero event)."""


class OutOfRegimeError(IrsNomaError):
    """A high-SNR approximation was requested outside its regime."""


# ---------------------------------------------------------------------------
# System configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SystemConfig:
    """Scalar parameters of one experiment point.

    ``rho`` is the linear transmit SNR and ``rate_bpcu`` the far-user target
    rate in bits per channel use.
    """

    M: int
    K: int
    N: int
    P: int
    Q: int
    alpha1_sq: float = 0.8
    alpha2_sq: float = 0.2
    rho: float = 1.0
    rate_bpcu: float = 1.0

    def __post_init__(self) -> None:
        for name in ("M", "K", "N", "P", "Q"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
            if value < 1:
                raise ConfigError(f"{name} must be >= 1, got {value}")
        if self.K > self.M:
            raise ConfigError(f"K={self.K} beams need at least as many antennas, got M={self.M}")
        if self.N != self.P * self.Q:
            raise ConfigError(f"N={self.N} must equal P*Q={self.P}*{self.Q}")
        if self.alpha1_sq < 0 or self.alpha2_sq < 0:
            raise ConfigError("power coefficients must be non-negative")
        if abs(self.alpha1_sq + self.alpha2_sq - 1.0) > ALPHA_TOLERANCE:
            raise ConfigError(
                f"alpha1_sq + alpha2_sq must be 1, got {self.alpha1_sq + self.alpha2_sq!r}"
            )
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise ConfigError(f"rho must be positive and finite, got {self.rho!r}")
        if not (math.isfinite(self.rate_bpcu) and self.rate_bpcu > 0):
            raise ConfigError(f"rate_bpcu must be positive, got {self.rate_bpcu!r}")

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.rho)

    @property
    def epsilon(self) -> float:
        """SINR threshold 2^R - 1."""
        return 2.0**self.rate_bpcu - 1.0

    @property
    def tau(self) -> float:
        return self.alpha1_sq - self.epsilon * self.alpha2_sq

    def with_rho(self, rho: float) -> SystemConfig:
        return replace(self, rho=float(rho))

    def with_snr_db(self, snr_db: float) -> SystemConfig:
        return self.with_rho(10.0 ** (snr_db / 10.0))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


# ---------------------------------------------------------------------------
# Channel and reflection types
# ---------------------------------------------------------------------------


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=np.complex128, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One draw of beams, BS->IRS matrix and IRS->far-user vector.

    ``D`` and ``H_eff`` are derived on construction: ``D = diag(conj(h_far))``
    and ``H_eff = G @ W`` (column i is h_i).
    """

    W: np.ndarray
    G: np.ndarray
    h_far: np.ndarray
    served_beam: int = 0
    D: np.ndarray = field(init=False, repr=False)
    H_eff: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        w = _frozen(np.atleast_2d(self.W))
        g = _frozen(np.atleast_2d(self.G))
        h_far = _frozen(np.ravel(self.h_far))
        m, k = w.shape
        n = h_far.shape[0]
        if g.shape != (n, m):
            raise ConfigError(f"G must be {n}x{m}, got {g.shape[0]}x{g.shape[1]}")
        if not 0 <= self.served_beam < k:
            raise ConfigError(f"served_beam must be in [0, {k}), got {self.served_beam}")
        gram = w.conj().T @ w
        if np.max(np.abs(gram - np.eye(k))) > ORTHONORMAL_TOLERANCE:
            raise ConfigError("beam matrix W must have orthonormal columns")
        for array in (w, g, h_far):
            if not np.all(np.isfinite(array)):
                raise ConfigError("channel entries must be finite")
        object.__setattr__(self, "W", w)
        object.__setattr__(self, "G", g)
        object.__setattr__(self, "h_far", h_far)
        object.__setattr__(self, "D", _frozen(np.diag(h_far.conj())))
        object.__setattr__(self, "H_eff", _frozen(g @ w))

    @property
    def N(self) -> int:
        return self.h_far.shape[0]

    @property
    def K(self) -> int:
        return self.W.shape[1]

    @property
    def effective(self) -> np.ndarray:
        """N x K matrix whose column i is D h_i."""
        return self.h_far.conj()[:, None] * self.H_eff


@dataclass(frozen=True, eq=False)
class ReflectVector:
    """Reflection vector theta: magnitudes are amplitudes, phases are shifts."""

    values: np.ndarray
    scheme: Scheme
    index: int | None = None

    def __post_init__(self) -> None:
        values = _frozen(np.ravel(self.values))
        if np.linalg.norm(values) > 1.0 + NORM_TOLERANCE:
            raise DomainError(f"reflection vector norm {np.linalg.norm(values):.6g} exceeds 1")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True, eq=False)
class Codebook:
    """Ordered set of unit-norm reflection vectors, stored column-wise."""

    kind: Scheme
    matrix: np.ndarray
    P: int | None = None
    Q: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "matrix", _frozen(np.atleast_2d(self.matrix)))

    @property
    def N(self) -> int:
        return self.matrix.shape[0]

    def __len__(self) -> int:
        return self.matrix.shape[1]

    def __getitem__(self, index: int) -> ReflectVector:
        return ReflectVector(self.matrix[:, index], self.kind, index)

    def __iter__(self):
        return (self[i] for i in range(len(self)))


@dataclass(frozen=True)
class SinrBreakdown:
    """Far-user SINR and its linear power components."""

    useful: float
    self_interference: float
    inter_pair: float
    noise: float
    sinr: float = field(init=False)

    def __post_init__(self) -> None:
        denominator = self.self_interference + self.inter_pair + self.noise
        object.__setattr__(self, "sinr", self.useful / denominator)


# ---------------------------------------------------------------------------
# Analytics and simulation results
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalyticParams:
    """Derived closed-form parameters; ``xi`` is None when tau <= 0."""

    epsilon: float
    tau: float
    xi: float | None

    @property
    def feasible(self) -> bool:
        return self.tau > 0


@dataclass(frozen=True)
class OutageEstimate:
    """Monte Carlo outage probability with a Wilson 95% interval."""

    scheme: Scheme
    config: SystemConfig
    seed: int
    trials: int
    failures: int
    ci_low: float
    ci_high: float

    @property
    def p_hat(self) -> float:
        return self.failures / self.trials

    @property
    def needs_more_trials(self) -> bool:
        return self.failures < RARE_EVENT_FLOOR

    def z_score(self, reference: float) -> float:
        """Standardized distance from a reference probability."""
        sigma = math.sqrt(reference * (1.0 - reference) / self.trials)
        if sigma == 0.0:
            return 0.0 if self.p_hat == reference else math.inf
        return (self.p_hat - reference) / sigma


@dataclass
class SweepPoint:
    """Estimates at one SNR, plus the on-off closed forms where they apply."""

    rho_db: float
    estimates: dict[Scheme, OutageEstimate]
    analytic: float | None = None
    approx: float | None = None
    floor: float | None = None


@dataclass
class SweepResult:
    """Ordered SNR sweep for one configuration template."""

    config: SystemConfig
    seed: int
    trials: int
    points: list[SweepPoint] = field(default_factory=list)

    def __post_init__(self) -> None:
        grid = [p.rho_db for p in self.points]
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("SNR grid must be strictly increasing")

    @property
    def rho_db(self) -> list[float]:
        return [p.rho_db for p in self.points]

    def curve(self, scheme: Scheme) -> list[OutageEstimate]:
        return [p.estimates[scheme] for p in self.points]


# ---------------------------------------------------------------------------
# Experiment files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SnrGrid:
    """Inclusive dB grid START:STOP:STEP."""

    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        for value in (self.start, self.stop, self.step):
            if not math.isfinite(value):
                raise ConfigError("SNR grid bounds must be finite")
        if self.step <= 0:
            raise ConfigError(f"SNR step must be positive, got {self.step:g}")
        if self.stop < self.start:
            raise ConfigError(f"empty SNR grid: stop {self.stop:g} < start {self.start:g}")

    def values(self) -> list[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 10) for i in range(count)]

    def __str__(self) -> str:
        return ":".join(_format_number(v) for v in (self.start, self.stop, self.step))


def _format_number(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


@dataclass(frozen=True)
class ExperimentSpec:
    """Everything needed to rerun an experiment: system, schemes, grid, trials, seed.

    ``N`` and ``Q`` are tuples; one curve is produced per (N, Q) pair with
    P = N / Q. An explicit ``P`` must agree with every pair.
    """

    M: int
    K: int
    N: tuple[int, ...]
    Q: tuple[int, ...]
    snr_db: SnrGrid
    P: int | None = None
    alpha1_sq: float = 0.8
    alpha2_sq: float = 0.2
    rate_bpcu: float = 1.0
    schemes: tuple[Scheme, ...] = (Scheme.ONOFF,)
    trials: int = 200_000
    seed: int = 0
    out: str | None = None
    served_beam: int = 0
    name: str | None = None

    def __post_init__(self) -> None:
        if not self.N or not self.Q:
            raise ConfigError("N and Q need at least one value")
        if not self.schemes:
            raise ConfigError("at least one scheme is required")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not 0 <= self.served_beam < self.K:
            raise ConfigError(f"served_beam must be in [0, {self.K}), got {self.served_beam}")
        self.variants()

    def variants(self) -> list[SystemConfig]:
        """One unit-SNR configuration template per (N, Q) pair."""
        configs: list[SystemConfig] = []
        for n in self.N:
            for q in self.Q:
                if n % q:
                    raise ConfigError(f"N={n} is not divisible by Q={q}")
                p = n // q
                if self.P is not None and self.P != p:
                    raise ConfigError(f"P={self.P} does not match N/Q={n}/{q}")
                configs.append(
                    SystemConfig(
                        M=self.M,
                        K=self.K,
                        N=n,
                        P=p,
                        Q=q,
                        alpha1_sq=self.alpha1_sq,
                        alpha2_sq=self.alpha2_sq,
                        rate_bpcu=self.rate_bpcu,
                    )
                )
        return configs


@dataclass
class LintWarning:
    """A single warning or error from experiment linting."""

    key: str | None
    code: str
    message: str
    severity: str  # "error" or "warning"


@dataclass
class ValidationRow:
    """One simulated-vs-closed-form comparison point."""

    N: int
    Q: int
    rho_db: float
    trials: int
    failures: int
    outage_mc: float
    outage_analytic: float
    z: float
    passed: bool
