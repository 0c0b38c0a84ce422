"""Static analysis for irsnoma experiment specs."""

from __future__ import annotations

from irsnoma._types import ExperimentSpec, LintWarning, Scheme

MIN_TRIALS = 10_000


def lint_spec(spec: ExperimentSpec, *, validating: bool = False) -> list[LintWarning]:
    """Check an experiment for settings that are legal but likely wrong.

    Error codes:
        E001: Ideal scheme requested with N < K
        E002: Duplicate scheme

    Warning codes:
        W001: tau <= 0: outage is identically 1
        W002: Fewer than 10^4 trials
        W003: Validation requested where no closed form applies
        W004: alpha1_sq < alpha2_sq
    """
    warnings: list[LintWarning] = []

    # E001: zero-forcing needs a non-trivial null space
    if Scheme.IDEAL in spec.schemes:
        for n in spec.N:
            if n < spec.K:
                warnings.append(
                    LintWarning(
                        key="N",
                        code="E001",
                        message=f"ideal scheme needs N >= K, got N={n}, K={spec.K}",
                        severity="error",
                    )
                )

    # E002: duplicate schemes
    seen: set[Scheme] = set()
    for scheme in spec.schemes:
        if scheme in seen:
            warnings.append(
                LintWarning(
                    key="schemes",
                    code="E002",
                    message=f"duplicate scheme: '{scheme.value}'",
                    severity="error",
                )
            )
        seen.add(scheme)

    # W001: the useful term can never beat the threshold
    tau = spec.alpha1_sq - (2.0**spec.rate_bpcu - 1.0) * spec.alpha2_sq
    if tau <= 0:
        warnings.append(
            LintWarning(
                key="rate_bpcu",
                code="W001",
                message=(
                    f"alpha1_sq - (2^R - 1) * alpha2_sq = {tau:.6g} <= 0; "
                    "every trial is an outage"
                ),
                severity="warning",
            )
        )

    # W002: intervals too wide to say much
    if spec.trials < MIN_TRIALS:
        warnings.append(
            LintWarning(
                key="trials",
                code="W002",
                message=f"{spec.trials} trials give wide intervals; use >= {MIN_TRIALS}",
                severity="warning",
            )
        )

    # W003: nothing to validate against
    if validating:
        if Scheme.ONOFF not in spec.schemes:
            warnings.append(
                LintWarning(
                    key="schemes",
                    code="W003",
                    message="closed forms exist for the on-off scheme only",
                    severity="warning",
                )
            )
        if spec.K >= 2 and any(q != 1 for q in spec.Q):
            warnings.append(
                LintWarning(
                    key="Q",
                    code="W003",
                    message="no closed form for K >= 2 with Q > 1; those curves are skipped",
                    severity="warning",
                )
            )

    # W004: conventional NOMA ordering reversed
    if spec.alpha1_sq < spec.alpha2_sq:
        warnings.append(
            LintWarning(
                key="alpha1_sq",
                code="W004",
                message=(
                    "alpha1_sq < alpha2_sq: alpha1_sq still weights the far user's "
                    "useful term in the simulated SINR"
                ),
                severity="warning",
            )
        )

    return warnings
