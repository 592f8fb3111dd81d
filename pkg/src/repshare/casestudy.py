"""Replay of the published eight-buyer / five-seller case study.

Buyer b2 asks about seller s4 after a transaction worth 1800. Five known
advisors answer; b1, b3, b5 and b7 are reputed, b4 is not. The fixture's
total opinion counts are back-solved from the published honesty
percentages (b1 20/26 -> 76.92 %, b3 14/17 -> 82.35 %, b7 9/10 -> 90 %);
b4 and b5 only need plausible totals because neither contributes a weight.
"""

from __future__ import annotations

import json
import math

from .core import EngineParams, Opinion
from .ledger import BuyerLedger, seed_record
from .report import GoldenCheck, RunReport
from .scenario import digest_bytes
from .sharing import share_reputation
from .simulation import RoundTrace, compute_metrics
from .solicitation import select_advisors

REQUESTER = "b2"
SELLER = "s4"
INDIVIDUAL = 0.389
TRANSACTION_VALUE = 1800.0

# advisor -> (reputation, honest opinions, total opinions, reported rating of s4)
ADVISORS = {
    "b1": (0.45, 20, 26, 0.380),
    "b3": (0.49, 14, 17, 0.387),
    "b4": (0.31, 8, 17, 0.490),
    "b5": (0.51, 11, 14, 0.580),
    "b7": (0.465, 9, 10, 0.395),
}
LIARS = {"b5"}

GOLDEN = {
    "m2": (0.0091505, 1e-6),
    "or_others": (0.38746, 1e-4),
    "omega": (0.017751, 1e-5),
    "phi": (0.026627, 1e-5),
}
GOLDEN_VERDICTS = {"b1": "Honest", "b3": "Honest", "b5": "Dishonest", "b7": "Honest"}
GOLDEN_EXCLUDED = ("b4",)
GOLDEN_REPUTATIONS = {"b1": 0.459763, "b3": 0.499053, "b5": 0.496953, "b7": 0.474496}
REPUTATION_TOL = 1e-5


def case_study_params() -> EngineParams:
    return EngineParams(
        kappa=0.95, alpha_hat=0.6, epsilon_hat=0.3, lambda_decay=0.001, penalty_p=1.5,
        exp_base=1.01, j_step=0.01, rep_threshold=0.38, disrep_threshold=0.15, min_advisors=2,
    )


def case_study_ledger(params: EngineParams | None = None) -> BuyerLedger:
    params = params or case_study_params()
    records = {
        a: seed_record(a, rep, params, honest, total)
        for a, (rep, honest, total, _) in ADVISORS.items()
    }
    return BuyerLedger(REQUESTER, records, params.delta_init)


def case_study_opinions() -> list[Opinion]:
    return [Opinion(a, SELLER, sr, 1) for a, (_, _, _, sr) in ADVISORS.items()]


def _fixture_digest(params: EngineParams) -> str:
    fixture = {
        "engine": params.to_dict(), "advisors": ADVISORS, "individual": INDIVIDUAL,
        "x": TRANSACTION_VALUE, "requester": REQUESTER, "seller": SELLER,
    }
    return digest_bytes(json.dumps(fixture, sort_keys=True, separators=(",", ":")).encode())


def _close(name: str, computed, expected: float, tol: float) -> GoldenCheck:
    ok = computed is not None and math.isfinite(computed) and abs(computed - expected) <= tol
    return GoldenCheck(name, expected, None if computed is None else float(computed), tol, ok)


def run_case_study() -> RunReport:
    """Replay the case study through solicitation, filtering, weighting, aggregation and update."""
    params = case_study_params().checked()
    ledger = case_study_ledger(params)
    plan = select_advisors(ledger, ADVISORS, params, rng=0)
    updated, outcome = share_reputation(
        ledger, plan, case_study_opinions(), INDIVIDUAL, TRANSACTION_VALUE, params
    )

    verdicts = {v.opinion.advisor: v.label.value for v in outcome.verdicts}
    excluded = tuple(o.advisor for o, _ in outcome.admission.excluded)
    aggregate = outcome.result.aggregate
    checks = [
        _close("m2", outcome.m2, *GOLDEN["m2"]),
        GoldenCheck("verdicts", GOLDEN_VERDICTS, verdicts, None, verdicts == GOLDEN_VERDICTS),
        GoldenCheck("excluded", list(GOLDEN_EXCLUDED), list(excluded), None, excluded == GOLDEN_EXCLUDED),
        _close("or_others", aggregate, *GOLDEN["or_others"]),
        _close("omega", outcome.omega, *GOLDEN["omega"]),
        _close("phi", outcome.phi, *GOLDEN["phi"]),
    ]
    for a, expected in GOLDEN_REPUTATIONS.items():
        rec = updated.get(a)
        checks.append(_close(f"reputation[{a}]", None if rec is None else rec.reputation, expected, REPUTATION_TOL))

    trace = RoundTrace(
        0, REQUESTER, SELLER, TRANSACTION_VALUE, INDIVIDUAL, plan.targets, plan.explored,
        tuple(o.advisor for o in case_study_opinions()), outcome, ledger.delta, ledger.delta,
        {REQUESTER: updated},
    )
    # The buyer's own experience stands in for the unknown true quality.
    metrics = compute_metrics([trace], {a: a in LIARS for a in ADVISORS})
    details = {
        "requester": REQUESTER,
        "seller": SELLER,
        "individual": INDIVIDUAL,
        "x": TRANSACTION_VALUE,
        "m2": outcome.m2,
        "verdicts": verdicts,
        "excluded": list(excluded),
        "weights": {c.advisor: c.weight for c in outcome.result.contributors},
        "or_others": None if aggregate is None else float(aggregate),
        "omega": outcome.omega,
        "phi": outcome.phi,
        "updated_reputations": {a: float(updated.records[a].reputation) for a in sorted(updated.records)},
    }
    return RunReport(
        _fixture_digest(params), params, metrics, (trace,), tuple(checks), details
    )


def format_report(report: RunReport) -> str:
    """Human-readable summary, values shown to 4 decimals."""
    d = report.details
    lines = [
        f"Individual reputation of {d['seller']} held by {d['requester']}: {d['individual']:.4f}",
        f"Excluded before filtering: {', '.join(d['excluded']) or 'none'}",
        f"Second moment about individual reputation: {d['m2']:.4f}",
        "Filtered opinions: " + ", ".join(f"{a}={lab}" for a, lab in d["verdicts"].items()),
        "Weights: " + ", ".join(f"{a}={w:.4f}" for a, w in d["weights"].items()),
        f"Aggregated shared reputation: {d['or_others']:.4f}",
        f"Reputation increase factor: {d['omega']:.5f}   decrease factor: {d['phi']:.5f}",
        "Updated advisor reputations: "
        + ", ".join(f"{a}={v:.4f}" for a, v in d["updated_reputations"].items()),
        "",
    ]
    for c in report.checks:
        tol = "" if c.tolerance is None else f" (±{c.tolerance:g})"
        lines.append(f"[{'PASS' if c.ok else 'FAIL'}] {c.name}: expected {c.expected}{tol}, got {c.computed}")
    return "\n".join(lines)
