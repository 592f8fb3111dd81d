"""Run reports and their CSV / JSON emission."""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from .core import EngineParams
from .persistence import atomic_write_text
from .simulation import RoundTrace, SimulationMetrics

REPORT_SCHEMA_VERSION = 1
METRICS_COLUMNS = (
    "round", "buyer", "seller", "precision", "recall", "agg_error", "sr_absent", "contamination",
)
ADVISOR_COLUMNS = ("round", "buyer", "advisor", "reputation", "category")
FORMATS = frozenset({"csv", "json"})


class OutputError(OSError):
    """Writing a result file failed; the message carries the path."""


@dataclass(frozen=True)
class GoldenCheck:
    name: str
    expected: object
    computed: object
    tolerance: float | None
    ok: bool


@dataclass(frozen=True)
class RunReport:
    scenario_digest: str
    engine: EngineParams
    metrics: SimulationMetrics
    traces: tuple[RoundTrace, ...] | None = None
    checks: tuple[GoldenCheck, ...] = ()
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)


def fmt(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def _num(value):
    """Round floats to 6 decimals for JSON output; recurse into containers."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, float):
        return round(float(value), 6)
    if isinstance(value, dict):
        return {k: _num(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_num(v) for v in value]
    return value


def trace_to_dict(t: RoundTrace) -> dict:
    o = t.outcome
    return {
        "round": t.round,
        "buyer": t.buyer,
        "seller": t.seller,
        "x": t.x,
        "quality": t.quality,
        "individual": float(o.individual),
        "targets": list(t.targets),
        "explored": sorted(t.explored),
        "responders": list(t.responders),
        "admitted": [o_.advisor for o_ in o.admission.admitted],
        "excluded": [[a, r.value] for a, r in o.result.excluded],
        "aborted": o.aborted,
        "m2": o.m2,
        "verdicts": [
            {"advisor": v.opinion.advisor, "reported": float(v.opinion.reported),
             "deviation": v.deviation, "label": v.label.value}
            for v in o.verdicts
        ],
        "weights": {c.advisor: c.weight for c in o.result.contributors},
        "or_others": None if o.result.aggregate is None else float(o.result.aggregate),
        "unweighted_fallback": o.result.unweighted_fallback,
        "omega": o.omega,
        "phi": o.phi,
        "delta_before": t.delta_before,
        "delta_after": t.delta_after,
    }


def metrics_to_dict(m: SimulationMetrics) -> dict:
    return {
        "rounds": [
            {"round": r.round, "buyer": r.buyer, "seller": r.seller, "precision": r.precision,
             "recall": r.recall, "agg_error": r.agg_error, "sr_absent": r.sr_absent,
             "contamination": r.contamination, "admitted": r.admitted}
            for r in m.rounds
        ],
        "trajectories": {a: list(v) for a, v in sorted(m.trajectories.items())},
        "final": {
            "contamination": m.final_contamination,
            "liar_mean_reputation": m.liar_mean_reputation,
            "honest_mean_reputation": m.honest_mean_reputation,
        },
    }


def report_to_dict(report: RunReport) -> dict:
    out = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "scenario_digest": report.scenario_digest,
        "engine": report.engine.to_dict(),
        "metrics": metrics_to_dict(report.metrics),
    }
    if report.details:
        out["details"] = report.details
    if report.checks:
        out["checks"] = [
            {"name": c.name, "expected": c.expected, "computed": c.computed,
             "tolerance": c.tolerance, "ok": c.ok}
            for c in report.checks
        ]
        out["passed"] = report.passed
    if report.traces is not None:
        out["traces"] = [trace_to_dict(t) for t in report.traces]
    return _num(out)


def metrics_csv(m: SimulationMetrics) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(METRICS_COLUMNS)
    for r in m.rounds:
        writer.writerow([
            r.round, r.buyer, r.seller, fmt(r.precision), fmt(r.recall), fmt(r.agg_error),
            int(r.sr_absent), fmt(r.contamination),
        ])
    return buf.getvalue()


def advisors_csv(m: SimulationMetrics) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ADVISOR_COLUMNS)
    for row in m.advisor_rows:
        writer.writerow([row.round, row.buyer, row.advisor, fmt(row.reputation), row.category.value])
    return buf.getvalue()


def emit_results(report: RunReport, formats: Iterable[str], out_dir) -> list[Path]:
    """Write ``metrics.csv`` / ``advisors.csv`` (csv) and ``report.json`` (json) into ``out_dir``."""
    formats = set(formats)
    unknown = formats - FORMATS
    if unknown:
        raise ValueError(f"unknown output formats: {', '.join(sorted(unknown))}")
    out_dir = Path(out_dir)
    files: list[tuple[str, str]] = []
    if "csv" in formats:
        files.append(("metrics.csv", metrics_csv(report.metrics)))
        files.append(("advisors.csv", advisors_csv(report.metrics)))
    if "json" in formats:
        files.append(("report.json", json.dumps(report_to_dict(report), indent=2) + "\n"))
    written = []
    for name, text in files:
        path = out_dir / name
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
            written.append(atomic_write_text(path, text))
        except OSError as exc:
            raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return written


def empty_metrics() -> SimulationMetrics:
    return SimulationMetrics((), (), {}, 0.0, None, None)
