"""Run logger for irsnoma: append-only JSONL records of outage estimates."""

from __future__ import annotations

import json
import sys
import uuid
from datetime import datetime, timezone
from pathlib import Path
from typing import IO, Any

from irsnoma._types import OutageEstimate


class RunLogger:
    """Append-only JSONL run logger.

    Each estimate produces one JSON line with enough context (configuration,
    seed, trial count) to reproduce it.
    """

    def __init__(
        self,
        path: str | Path | None = None,
        *,
        stream: IO[str] | None = None,
    ):
        self._path = Path(path) if path else None
        self._stream = stream

        if self._path is None and self._stream is None:
            self._stream = sys.stdout

    def __call__(self, estimate: OutageEstimate) -> dict[str, Any]:
        return self.log(estimate)

    def log(self, estimate: OutageEstimate) -> dict[str, Any]:
        """Serialize and append an OutageEstimate. Returns the record dict."""
        record = self._to_record(estimate)
        line = json.dumps(record, default=str, ensure_ascii=False)

        if self._path:
            with self._path.open("a", encoding="utf-8") as f:
                f.write(line + "\n")

        if self._stream:
            self._stream.write(line + "\n")
            self._stream.flush()

        return record

    def _to_record(self, estimate: OutageEstimate) -> dict[str, Any]:
        config = estimate.config
        return {
            "run_id": uuid.uuid4().hex[:12],
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "scheme": estimate.scheme.value,
            "rho_db": config.snr_db,
            "config": config.to_dict(),
            "seed": estimate.seed,
            "trials": estimate.trials,
            "failures": estimate.failures,
            "outage": estimate.p_hat,
            "ci_low": estimate.ci_low,
            "ci_high": estimate.ci_high,
            "needs_more_trials": estimate.needs_more_trials,
        }
