"""Check reports and suite configuration.

A report file is a single UTF-8 JSON object {config, engine_version, reports}
whose reports carry exactly the keys identity, anchor, samples, max_residual,
rms_residual, tolerance, verdict, witness.  Serialisation is canonical
(sorted keys, shortest round-trip floats), and every reduction feeding a
report is deterministic, so identical configs produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

ENGINE_VERSION = "0.1.0"


@dataclass(frozen=True)
class CheckReport:
    identity: str
    anchor: str
    samples: int
    max_residual: Optional[float]
    rms_residual: Optional[float]
    tolerance: float
    verdict: str                      # pass | fail | error
    witness: Optional[Tuple[float, ...]]

    def to_dict(self):
        return {
            "identity": self.identity,
            "anchor": self.anchor,
            "samples": self.samples,
            "max_residual": self.max_residual,
            "rms_residual": self.rms_residual,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def make_report(identity: str, anchor: str, residuals, tolerance: float,
                points=None) -> CheckReport:
    """Summarise per-sample residual magnitudes into a report."""
    res = np.atleast_1d(np.asarray(residuals, float))
    k = int(np.argmax(res))
    witness = None
    if points is not None:
        pts = np.atleast_2d(np.asarray(points, float))
        witness = tuple(float(v) for v in pts[min(k, pts.shape[0] - 1)])
    mx = float(np.max(res))
    rms = float(np.sqrt(np.mean(res**2)))
    verdict = "pass" if mx <= tolerance else "fail"
    return CheckReport(identity, anchor, int(res.size), mx, rms,
                       float(tolerance), verdict, witness)


def error_report(identity: str, anchor: str, tolerance: float,
                 message: str = "") -> CheckReport:
    return CheckReport(identity, anchor, 0, None, None, float(tolerance),
                       "error", None)


@dataclass
class SuiteConfig:
    """Reproducible description of one verification run."""

    manifold: str
    suite: str
    grid: Optional[object] = None          # int or per-coordinate tuple
    radii: Tuple[float, ...] = (1.0, 2.0)
    jet_order: Optional[int] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    seed: int = 20200923
    samples: int = 200

    def tolerance(self, identity: str, default: float) -> float:
        return float(self.tolerances.get(identity, default))

    def to_dict(self):
        grid = self.grid
        if isinstance(grid, tuple):
            grid = list(grid)
        return {
            "manifold": self.manifold,
            "suite": self.suite,
            "grid": grid,
            "radii": list(self.radii),
            "jet_order": self.jet_order,
            "tolerances": dict(sorted(self.tolerances.items())),
            "seed": self.seed,
            "samples": self.samples,
        }


def report_json(config: SuiteConfig, reports: List[CheckReport]) -> str:
    payload = {
        "config": config.to_dict(),
        "engine_version": ENGINE_VERSION,
        "reports": [r.to_dict() for r in reports],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def all_pass(reports: List[CheckReport]) -> bool:
    return all(r.verdict == "pass" for r in reports)
