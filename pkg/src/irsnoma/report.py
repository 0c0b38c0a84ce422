"""Report generators: sweep CSVs and validation reports with SHA-256 evidence."""

from __future__ import annotations

import csv
import hashlib
import html
import io
import json
import math
from collections.abc import Iterable
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from irsnoma._types import Scheme, SweepResult, SystemConfig, ValidationRow
from irsnoma.analytics import analytic_approx, analytic_floor, analytic_outage

SIMULATION_COLUMNS = [
    "scheme", "rho_db", "K", "M", "N", "P", "Q", "alpha1_sq", "alpha2_sq", "rate_bpcu",
    "trials", "failures", "outage_mc", "ci_low", "ci_high", "outage_analytic", "floor",
]
ANALYTIC_COLUMNS = [
    "scheme", "rho_db", "K", "M", "N", "P", "Q", "alpha1_sq", "alpha2_sq", "rate_bpcu",
    "outage_analytic", "outage_approx", "floor",
]


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _hash_string(s: str) -> str:
    return hashlib.sha256(s.encode()).hexdigest()


def _cell(value: Any) -> str:
    """CSV cell: empty for None, shortest round-trip repr for floats."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _config_cells(config: SystemConfig, rho_db: float) -> list[Any]:
    return [
        rho_db, config.K, config.M, config.N, config.P, config.Q,
        config.alpha1_sq, config.alpha2_sq, config.rate_bpcu,
    ]


def _render_csv(header: list[str], rows: Iterable[list[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buffer.getvalue()


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def simulation_csv(sweeps: Iterable[SweepResult]) -> str:
    """One row per (curve, SNR, scheme); closed forms on on-off rows only."""
    rows: list[list[Any]] = []
    for result in sweeps:
        for point in result.points:
            for scheme, estimate in point.estimates.items():
                closed = scheme is Scheme.ONOFF
                rows.append([
                    scheme.value,
                    *_config_cells(estimate.config, point.rho_db),
                    estimate.trials,
                    estimate.failures,
                    estimate.p_hat,
                    estimate.ci_low,
                    estimate.ci_high,
                    point.analytic if closed else None,
                    point.floor if closed else None,
                ])
    return _render_csv(SIMULATION_COLUMNS, rows)


def analytic_csv(templates: Iterable[SystemConfig], snr_db: Iterable[float]) -> str:
    """Closed-form on-off outage over a grid, one block of rows per template."""
    grid = list(snr_db)
    rows: list[list[Any]] = []
    for template in templates:
        for db in grid:
            config = template.with_snr_db(db)
            rows.append([
                Scheme.ONOFF.value,
                *_config_cells(config, db),
                analytic_outage(config),
                analytic_approx(config),
                analytic_floor(config),
            ])
    return _render_csv(ANALYTIC_COLUMNS, rows)


def write_text(path: str | Path, content: str) -> None:
    """Write UTF-8 with LF line endings."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as f:
        f.write(content)


def write_simulation_csv(path: str | Path, sweeps: Iterable[SweepResult]) -> str:
    content = simulation_csv(sweeps)
    write_text(path, content)
    return content


def write_analytic_csv(
    path: str | Path, templates: Iterable[SystemConfig], snr_db: Iterable[float],
) -> str:
    content = analytic_csv(templates, snr_db)
    write_text(path, content)
    return content


# ---------------------------------------------------------------------------
# Validation reports
# ---------------------------------------------------------------------------


def _finite_or_str(value: float) -> float | str:
    return value if math.isfinite(value) else str(value)


def _build_report_data(
    rows: list[ValidationRow],
    z_limit: float,
    spec_content: str = "",
) -> dict[str, Any]:
    """Build the canonical report data dict."""
    spec_hash = _hash_string(spec_content) if spec_content else ""
    point_rows = [
        {
            "N": r.N,
            "Q": r.Q,
            "rho_db": r.rho_db,
            "trials": r.trials,
            "failures": r.failures,
            "outage_mc": r.outage_mc,
            "outage_analytic": r.outage_analytic,
            "z": _finite_or_str(r.z),
            "passed": r.passed,
        }
        for r in rows
    ]
    passed = sum(1 for r in rows if r.passed)
    finite = [abs(r.z) for r in rows if math.isfinite(r.z)]
    worst = max(abs(r.z) for r in rows) if rows else 0.0

    data: dict[str, Any] = {
        "timestamp": _now_iso(),
        "spec_hash": spec_hash,
        "z_limit": z_limit,
        "summary": {
            "total": len(rows),
            "passed": passed,
            "failed": len(rows) - passed,
            "max_abs_z": _finite_or_str(worst),
            "mean_abs_z": sum(finite) / len(finite) if finite else 0.0,
        },
        "points": point_rows,
    }

    # Evidence bundle hash: SHA-256 of (spec_hash + serialised points)
    bundle_str = spec_hash + json.dumps(point_rows, sort_keys=True)
    data["evidence_hash"] = _hash_string(bundle_str)

    return data


def generate_text(
    rows: list[ValidationRow], z_limit: float, spec_content: str = "",
) -> str:
    """Terminal-friendly validation report."""
    data = _build_report_data(rows, z_limit, spec_content)
    lines: list[str] = []
    lines.append("irsnoma: Monte Carlo vs closed-form outage")
    lines.append("=" * 50)
    lines.append(f"Timestamp: {data['timestamp']}")
    if data["spec_hash"]:
        lines.append(f"Spec hash: {data['spec_hash'][:16]}...")
    lines.append("")

    s = data["summary"]
    lines.append(
        f"Results: {s['passed']}/{s['total']} within |z| <= {z_limit:g}, {s['failed']} outside"
    )
    lines.append("")

    for p in data["points"]:
        status = "PASS" if p["passed"] else "FAIL"
        z = p["z"]
        z_text = f"{z:+.2f}" if isinstance(z, float) else z
        lines.append(
            f"  [{status}] N={p['N']:<3} Q={p['Q']:<2} {p['rho_db']:>6.1f} dB  "
            f"mc={p['outage_mc']:.6g}  analytic={p['outage_analytic']:.6g}  z={z_text}"
        )
    lines.append("")
    lines.append(f"Evidence hash: {data['evidence_hash'][:16]}...")

    return "\n".join(lines)


def generate_json(
    rows: list[ValidationRow], z_limit: float, spec_content: str = "",
) -> str:
    """JSON validation report for CI pipelines."""
    data = _build_report_data(rows, z_limit, spec_content)
    return json.dumps(data, indent=2)


def generate_html(
    rows: list[ValidationRow], z_limit: float, spec_content: str = "",
) -> str:
    """HTML validation report.

    Uses Jinja2 if available, else stdlib fallback.
    """
    data = _build_report_data(rows, z_limit, spec_content)

    try:
        return _render_jinja2(data)
    except ImportError:
        return _render_stdlib(data)


def _render_jinja2(data: dict[str, Any]) -> str:
    from jinja2 import Environment, FileSystemLoader

    template_dir = Path(__file__).resolve().parent / "templates"
    env = Environment(
        loader=FileSystemLoader(str(template_dir)), autoescape=True
    )
    template = env.get_template("validation.html")
    return template.render(**data)


def _render_stdlib(data: dict[str, Any]) -> str:
    """Minimal HTML fallback without Jinja2."""
    e = html.escape
    rows = ""
    for p in data["points"]:
        status = "PASS" if p["passed"] else "FAIL"
        color = "#22c55e" if p["passed"] else "#ef4444"
        rows += (
            f"<tr><td>{p['N']}</td><td>{p['Q']}</td>"
            f"<td>{p['rho_db']:g}</td>"
            f"<td>{p['outage_mc']:.6g}</td>"
            f"<td>{p['outage_analytic']:.6g}</td>"
            f"<td>{e(str(p['z']))}</td>"
            f'<td style="color:{color};font-weight:bold">'
            f"{status}</td></tr>\n"
        )

    s = data["summary"]
    return f"""<!DOCTYPE html>
<html lang="en">
<head><meta charset="utf-8"><title>irsnoma validation report</title>
<style>
body {{ font-family: system-ui, sans-serif; max-width: 900px; margin: 2rem auto; padding: 0 1rem; }}
table {{ border-collapse: collapse; width: 100%; margin: 1rem 0; }}
th, td {{ border: 1px solid #d1d5db; padding: 0.5rem; text-align: left; }}
th {{ background: #f3f4f6; }}
.meta {{ color: #6b7280; font-size: 0.875rem; }}
</style></head>
<body>
<h1>irsnoma: Monte Carlo vs closed-form outage</h1>
<p class="meta">Timestamp: {data["timestamp"]}<br>
Spec hash: {data["spec_hash"][:16]}...<br>
Evidence hash: {data["evidence_hash"][:16]}...</p>

<h2>Results: {s["passed"]}/{s["total"]} within |z| &le; {data["z_limit"]:g}</h2>
<table>
<tr><th>N</th><th>Q</th><th>SNR (dB)</th><th>Monte Carlo</th>
<th>Closed form</th><th>z</th><th>Status</th></tr>
{rows}</table>
</body></html>"""
