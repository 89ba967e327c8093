"""Serializable campaign summaries: ``report.json`` plus a per-trial CSV."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


def _plain(obj):
    """Recursively convert numpy scalars/arrays and non-finite floats for JSON."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


@dataclass
class ExperimentReport:
    """Outcome of one campaign.

    ``checks`` hold invariants that must be true (a failure is an error);
    ``observations`` hold asymptotic comparisons that are only reported.
    Wall time lives in the run manifest so that this payload is reproducible.
    """

    experiment: str
    config: dict
    seed: int
    metrics: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    observations: dict = field(default_factory=dict)
    trials_header: list = field(default_factory=list)
    trials: list = field(default_factory=list)
    curves: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(bool(v) for v in self.checks.values())

    def failed_checks(self) -> list:
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self) -> dict:
        return _plain(
            {
                "experiment": self.experiment,
                "seed": self.seed,
                "config": self.config,
                "metrics": self.metrics,
                "checks": self.checks,
                "observations": self.observations,
                "passed": self.passed,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(self.trials_header)
        for row in self.trials:
            w.writerow([_cell(x) for x in row])
        return buf.getvalue()

    def write(self, out_dir) -> list:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json(), encoding="utf-8")
        (out / "trials.csv").write_text(self.to_csv(), encoding="utf-8", newline="")
        return [out / "report.json", out / "trials.csv"]


def _cell(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, np.integer):
        return int(x)
    return x
