"""irsnoma: IRS-assisted NOMA link simulation and outage analytics.

Draw channels, steer the surface with ideal zero-forcing or a DFT/on-off
codebook, estimate far-user outage by Monte Carlo, and check the estimates
against closed-form outage expressions.
"""

from irsnoma._types import (
    AnalyticParams,
    ChannelRealization,
    Codebook,
    ConfigError,
    DegenerateChannelError,
    DomainError,
    ExperimentSpec,
    InfeasibleSchemeError,
    IrsNomaError,
    LintWarning,
    OutageEstimate,
    OutOfRegimeError,
    ReflectVector,
    Scheme,
    SinrBreakdown,
    SnrGrid,
    SpecError,
    SweepPoint,
    SweepResult,
    SystemConfig,
)
from irsnoma.analytics import (
    analytic_outage,
    analytic_params,
    lemma1_approx,
    lemma1_exact,
    lemma2_exact,
    lemma2_floor,
)
from irsnoma.channel import draw_batch, draw_realization
from irsnoma.control import build_dft_codebook, build_onoff_codebook, ideal_theta, select_theta
from irsnoma.lint import lint_spec
from irsnoma.linkmetrics import is_outage, sinr_far
from irsnoma.loader import emit_spec, load_preset, load_spec, parse_spec
from irsnoma.numerics import RandomStream
from irsnoma.runlog import RunLogger
from irsnoma.simulator import Simulator, estimate_outage, sweep

__version__ = "0.1.0"

__all__ = [
    "AnalyticParams",
    "ChannelRealization",
    "Codebook",
    "ConfigError",
    "DegenerateChannelError",
    "DomainError",
    "ExperimentSpec",
    "InfeasibleSchemeError",
    "IrsNomaError",
    "LintWarning",
    "OutOfRegimeError",
    "OutageEstimate",
    "RandomStream",
    "ReflectVector",
    "RunLogger",
    "Scheme",
    "Simulator",
    "SinrBreakdown",
    "SnrGrid",
    "SpecError",
    "SweepPoint",
    "SweepResult",
    "SystemConfig",
    "analytic_outage",
    "analytic_params",
    "build_dft_codebook",
    "build_onoff_codebook",
    "draw_batch",
    "draw_realization",
    "emit_spec",
    "estimate_outage",
    "ideal_theta",
    "is_outage",
    "lemma1_approx",
    "lemma1_exact",
    "lemma2_exact",
    "lemma2_floor",
    "lint_spec",
    "load_preset",
    "load_spec",
    "parse_spec",
    "select_theta",
    "sinr_far",
    "sweep",
]
