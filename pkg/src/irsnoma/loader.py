"""YAML loaders for experiment files and built-in presets."""

from __future__ import annotations

import math
from collections.abc import Callable, Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any

import yaml

from irsnoma._types import ConfigError, ExperimentSpec, Scheme, SnrGrid, SpecError

# ---------------------------------------------------------------------------
# Presets mirroring the numerical study of single- and multi-pair IRS-NOMA
# ---------------------------------------------------------------------------

_COMMON: dict[str, Any] = {"M": 4, "alpha1_sq": 0.8, "alpha2_sq": 0.2, "trials": 200_000, "seed": 1}

PRESETS: dict[str, tuple[str, dict[str, Any]]] = {
    "fig2a": (
        "Single pair, ideal vs DFT vs on-off (K=1, N=12, Q=1, R=2)",
        {"K": 1, "N": 12, "Q": 1, "rate_bpcu": 2.0,
         "schemes": ["ideal", "dft", "onoff"], "snr_db": "0:30:3"},
    ),
    "fig2b": (
        "Single pair, effect of the on-off block size (K=1, N=12, Q in 1..3, R=2)",
        {"K": 1, "N": 12, "Q": [1, 2, 3], "rate_bpcu": 2.0,
         "schemes": ["onoff"], "snr_db": "0:60:5"},
    ),
    "fig3a": (
        "Two pairs, ideal vs DFT vs on-off (K=2, N=4, Q=1, R=1)",
        {"K": 2, "N": 4, "Q": 1, "rate_bpcu": 1.0,
         "schemes": ["ideal", "dft", "onoff"], "snr_db": "0:50:5"},
    ),
    "fig3b": (
        "Two pairs, effect of the surface size (K=2, N in 4/8/12, Q=1, R=1)",
        {"K": 2, "N": [4, 8, 12], "Q": 1, "rate_bpcu": 1.0,
         "schemes": ["onoff"], "snr_db": "0:50:5"},
    ),
    "fig3c": (
        "Two pairs, effect of the on-off block size (K=2, N=20, Q in 1/2/4/5, R=1)",
        {"K": 2, "N": 20, "Q": [1, 2, 4, 5], "rate_bpcu": 1.0,
         "schemes": ["onoff"], "snr_db": "0:50:5"},
    ),
}


def preset_names() -> list[str]:
    return sorted(PRESETS)


def preset_dict(name: str) -> dict[str, Any]:
    if name not in PRESETS:
        raise SpecError(f"unknown preset '{name}'. Valid: {preset_names()}")
    _, values = PRESETS[name]
    return {"name": name, **_COMMON, **values}


# ---------------------------------------------------------------------------
# Value converters
# ---------------------------------------------------------------------------


def _as_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError(f"expected an integer, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            return int(value.strip().replace("_", ""))
        except ValueError:
            pass
    raise ValueError(f"expected an integer, got {value!r}")


def _as_int_tuple(value: Any) -> tuple[int, ...]:
    if isinstance(value, (list, tuple)):
        if not value:
            raise ValueError("expected at least one value")
        return tuple(_as_int(v) for v in value)
    return (_as_int(value),)


def _as_float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        result = float(value)
    elif isinstance(value, str):
        try:
            result = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"expected a number or fraction, got {value!r}") from None
    else:
        raise ValueError(f"expected a number, got {value!r}")
    if not math.isfinite(result):
        raise ValueError(f"expected a finite number, got {value!r}")
    return result


def _as_schemes(value: Any) -> tuple[Scheme, ...]:
    names = value if isinstance(value, (list, tuple)) else [value]
    schemes: list[Scheme] = []
    for name in names:
        try:
            schemes.append(Scheme(str(name).strip().lower()))
        except ValueError:
            raise ValueError(
                f"unknown scheme '{name}'. Valid: {[s.value for s in Scheme]}"
            ) from None
    if not schemes:
        raise ValueError("expected at least one scheme")
    return tuple(schemes)


def parse_snr_grid(value: Any) -> SnrGrid:
    """Parse ``"START:STOP:STEP"`` (dB, inclusive stop) or a 3-element list."""
    if isinstance(value, (list, tuple)):
        parts = list(value)
    elif isinstance(value, str):
        parts = value.split(":")
    else:
        raise ValueError(
            f"expected 'START:STOP:STEP', got {value!r} (quote the grid in YAML)"
        )
    if len(parts) != 3:
        raise ValueError(f"expected 'START:STOP:STEP', got {value!r}")
    start, stop, step = (_as_float(p) for p in parts)
    try:
        return SnrGrid(start, stop, step)
    except ConfigError as e:
        raise ValueError(str(e)) from None


def _as_optional_str(value: Any) -> str | None:
    return None if value is None else str(value)


_CONVERTERS: dict[str, Callable[[Any], Any]] = {
    "name": _as_optional_str,
    "M": _as_int,
    "K": _as_int,
    "N": _as_int_tuple,
    "P": _as_int,
    "Q": _as_int_tuple,
    "alpha1_sq": _as_float,
    "alpha2_sq": _as_float,
    "rate_bpcu": _as_float,
    "schemes": _as_schemes,
    "snr_db": parse_snr_grid,
    "trials": _as_int,
    "seed": _as_int,
    "out": _as_optional_str,
    "served_beam": _as_int,
}

_REQUIRED = ("M", "K", "N", "snr_db")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


class _Locator:
    """Maps keys to file lines or to the command-line flag that set them."""

    def __init__(self, source: str, lines: Mapping[str, int], flags: Mapping[str, str]):
        self.source = source
        self.lines = lines
        self.flags = flags

    def error(self, key: str | None, message: str) -> SpecError:
        if key is not None and key in self.flags:
            return SpecError(f"{self.flags[key]}: {message}", source="command line")
        line = self.lines.get(key) if key is not None else None
        return SpecError(message, source=self.source, line=line)


def spec_from_dict(
    data: Mapping[str, Any],
    *,
    source: str = "<dict>",
    lines: Mapping[str, int] | None = None,
    flags: Mapping[str, str] | None = None,
) -> ExperimentSpec:
    """Build and validate an ExperimentSpec from a flat mapping.

    ``lines`` maps keys to 1-based file lines and ``flags`` maps overridden
    keys to the command-line flag that set them; both only shape messages.
    """
    loc = _Locator(source, lines or {}, flags or {})
    values: dict[str, Any] = {}
    for key, raw in data.items():
        converter = _CONVERTERS.get(key)
        if converter is None:
            raise loc.error(key, f"unknown key '{key}'. Valid: {sorted(_CONVERTERS)}")
        try:
            values[key] = converter(raw)
        except ValueError as e:
            raise loc.error(key, f"{key}: {e}") from None
    for key in _REQUIRED:
        if key not in values:
            raise loc.error(None, f"missing required key '{key}'")

    values.setdefault("Q", (1,))
    if "alpha1_sq" in values and "alpha2_sq" not in values:
        values["alpha2_sq"] = 1.0 - values["alpha1_sq"]
    elif "alpha2_sq" in values and "alpha1_sq" not in values:
        values["alpha1_sq"] = 1.0 - values["alpha2_sq"]
    _cross_check(values, loc)

    try:
        return ExperimentSpec(**values)
    except ConfigError as e:
        raise loc.error(None, str(e)) from None


def _cross_check(values: dict[str, Any], loc: _Locator) -> None:
    for key in ("M", "K", "P", "trials"):
        if key in values and values[key] < 1:
            raise loc.error(key, f"{key} must be >= 1, got {values[key]}")
    for key in ("N", "Q"):
        bad = [v for v in values[key] if v < 1]
        if bad:
            raise loc.error(key, f"{key} values must be >= 1, got {bad[0]}")
    if values["K"] > values["M"]:
        raise loc.error("K", f"K={values['K']} beams need M >= K antennas, got M={values['M']}")
    for n in values["N"]:
        for q in values["Q"]:
            if n % q:
                raise loc.error("Q", f"N={n} is not divisible by Q={q}")
            if "P" in values and values["P"] * q != n:
                raise loc.error("P", f"P={values['P']} does not match N/Q={n}/{q}")
    if "alpha1_sq" in values:
        total = values["alpha1_sq"] + values["alpha2_sq"]
        if abs(total - 1.0) > 1e-12 or min(values["alpha1_sq"], values["alpha2_sq"]) < 0:
            raise loc.error("alpha2_sq", f"alpha1_sq + alpha2_sq must be 1, got {total!r}")
    if "rate_bpcu" in values and values["rate_bpcu"] <= 0:
        raise loc.error("rate_bpcu", f"rate_bpcu must be positive, got {values['rate_bpcu']}")
    if "seed" in values and not 0 <= values["seed"] < 2**64:
        raise loc.error("seed", f"seed must be an unsigned 64-bit integer, got {values['seed']}")
    if "served_beam" in values and not 0 <= values["served_beam"] < values["K"]:
        raise loc.error(
            "served_beam", f"served_beam must be in [0, {values['K']}), got {values['served_beam']}"
        )


def _key_lines(text: str) -> dict[str, int]:
    node = yaml.compose(text, Loader=yaml.SafeLoader)
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {
        key.value: key.start_mark.line + 1
        for key, _ in node.value
        if isinstance(key, yaml.ScalarNode)
    }


def parse_spec(
    text: str,
    *,
    source: str = "<string>",
    overrides: Mapping[str, Any] | None = None,
    flags: Mapping[str, str] | None = None,
) -> ExperimentSpec:
    """Parse a flat YAML experiment mapping, then apply overrides."""
    try:
        data = yaml.safe_load(text)
        lines = _key_lines(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        raise SpecError(f"invalid YAML: {problem}", source=source, line=line) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise SpecError(
            f"experiment file must be a YAML mapping, got {type(data).__name__}", source=source
        )
    return _apply(data, source=source, lines=lines, overrides=overrides, flags=flags)


def _apply(
    data: dict[str, Any],
    *,
    source: str,
    lines: Mapping[str, int],
    overrides: Mapping[str, Any] | None,
    flags: Mapping[str, str] | None,
) -> ExperimentSpec:
    merged = dict(data)
    override_flags: dict[str, str] = {}
    for key, value in (overrides or {}).items():
        merged[key] = value
        override_flags[key] = (flags or {}).get(key, f"--set {key}")
    return spec_from_dict(merged, source=source, lines=lines, flags=override_flags)


def load_spec(
    path: str | Path,
    *,
    overrides: Mapping[str, Any] | None = None,
    flags: Mapping[str, str] | None = None,
) -> ExperimentSpec:
    """Load an experiment from a YAML file."""
    path = Path(path)
    return parse_spec(path.read_text(), source=str(path), overrides=overrides, flags=flags)


def load_preset(
    name: str,
    *,
    overrides: Mapping[str, Any] | None = None,
    flags: Mapping[str, str] | None = None,
) -> ExperimentSpec:
    return _apply(
        preset_dict(name), source=f"preset {name}", lines={}, overrides=overrides, flags=flags
    )


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------


def spec_to_dict(spec: ExperimentSpec) -> dict[str, Any]:
    def scalar_or_list(values: tuple[int, ...]) -> int | list[int]:
        return values[0] if len(values) == 1 else list(values)

    data: dict[str, Any] = {}
    if spec.name is not None:
        data["name"] = spec.name
    data["M"] = spec.M
    data["K"] = spec.K
    data["N"] = scalar_or_list(spec.N)
    if spec.P is not None:
        data["P"] = spec.P
    data["Q"] = scalar_or_list(spec.Q)
    data["alpha1_sq"] = spec.alpha1_sq
    data["alpha2_sq"] = spec.alpha2_sq
    data["rate_bpcu"] = spec.rate_bpcu
    data["schemes"] = [s.value for s in spec.schemes]
    data["snr_db"] = str(spec.snr_db)
    data["trials"] = spec.trials
    data["seed"] = spec.seed
    if spec.out is not None:
        data["out"] = spec.out
    if spec.served_beam:
        data["served_beam"] = spec.served_beam
    return data


def emit_spec(spec: ExperimentSpec) -> str:
    """Render a spec as a flat YAML mapping that ``parse_spec`` reads back equal."""
    return yaml.safe_dump(spec_to_dict(spec), sort_keys=False, default_flow_style=None)
