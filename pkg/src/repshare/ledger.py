"""Per-buyer advisor records: reputation updates and category transitions.

Honest advice moves an advisor's reputation toward 1 by a factor that grows
with the transaction value; dishonest advice moves it away from 1 by ``p``
times that factor, clamped at 0. After every update the advisor is
re-categorized against the reputed / dis-reputed thresholds. A new advisor
stays New until its reputation first exceeds the dis-reputation threshold.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace

from .core import (
    RATING_MAX,
    AdvisorCategory,
    EngineParams,
    Rating,
    bounded_growth,
    clamp_rating,
)
from .filtering import Label
from .weighting import BehaviorStats


@dataclass(frozen=True)
class AdvisorRecord:
    advisor: str
    reputation: Rating = Rating(0.0)
    stats: BehaviorStats = BehaviorStats()
    category: AdvisorCategory = AdvisorCategory.NEW

    def __post_init__(self) -> None:
        if not isinstance(self.reputation, Rating):
            object.__setattr__(self, "reputation", Rating(self.reputation))
        object.__setattr__(self, "category", AdvisorCategory(self.category))


@dataclass(frozen=True)
class BuyerLedger:
    """What one buyer remembers about its advisors, plus its exploration probability.

    Treat as immutable: every update returns a new ledger.
    """

    owner: str
    records: Mapping[str, AdvisorRecord] = field(default_factory=dict)
    delta: float = 1.0

    def get(self, advisor: str) -> AdvisorRecord | None:
        return self.records.get(advisor)

    def members(self, category: AdvisorCategory) -> list[str]:
        return sorted(a for a, rec in self.records.items() if rec.category is category)

    def category_of(self, advisor: str) -> AdvisorCategory | None:
        rec = self.records.get(advisor)
        return None if rec is None else rec.category

    def reputation_of(self, advisor: str) -> Rating:
        rec = self.records.get(advisor)
        return Rating(0.0) if rec is None else rec.reputation


def omega(x: float, params: EngineParams) -> float:
    """Reputation increase factor for a transaction of value ``x``."""
    if x < 0:
        raise ValueError(f"transaction value must be non-negative, got {x!r}")
    return min(bounded_growth(params.lambda_decay, x, params.exp_base), RATING_MAX)


def phi(x: float, params: EngineParams) -> float:
    """Reputation decrease factor: ``penalty_p`` times :func:`omega`."""
    return params.penalty_p * omega(x, params)


def reward(ar: float, omega_value: float) -> Rating:
    return clamp_rating(ar + omega_value * (1.0 - ar))


def penalize(ar: float, phi_value: float) -> Rating:
    return clamp_rating(ar - phi_value * (1.0 - ar))


def categorize(
    reputation: float, params: EngineParams, was_new: bool = False
) -> AdvisorCategory:
    if was_new and reputation <= params.disrep_threshold:
        return AdvisorCategory.NEW
    if reputation >= params.rep_threshold:
        return AdvisorCategory.REPUTED
    if reputation <= params.disrep_threshold:
        return AdvisorCategory.DIS_REPUTED
    return AdvisorCategory.NON_REPUTED


def recategorize(record: AdvisorRecord, params: EngineParams) -> AdvisorCategory:
    """Category implied by the record's (already updated) reputation.

    Folds the five overlapping list-update rules into one total function.
    """
    return categorize(
        record.reputation, params, was_new=record.category is AdvisorCategory.NEW
    )


def _apply(
    record: AdvisorRecord | None,
    advisor: str,
    verdict: Label,
    x: float,
    params: EngineParams,
) -> AdvisorRecord:
    if record is None:
        record = AdvisorRecord(advisor)
    honest = Label(verdict) is Label.HONEST
    if honest:
        ar = reward(record.reputation, omega(x, params))
    else:
        ar = penalize(record.reputation, phi(x, params))
    stats = BehaviorStats(
        record.stats.honest_count + int(honest), record.stats.total_count + 1
    )
    updated = replace(record, reputation=ar, stats=stats)
    return replace(updated, category=recategorize(updated, params))


def record_outcome(
    ledger: BuyerLedger,
    advisor: str,
    verdict: Label,
    x: float,
    params: EngineParams,
) -> BuyerLedger:
    """Apply one verdict for ``advisor``; unknown advisors are created as New at 0."""
    return record_round(ledger, [(advisor, verdict)], x, params)


def record_round(
    ledger: BuyerLedger,
    verdicts: Iterable[tuple[str, Label]],
    x: float,
    params: EngineParams,
) -> BuyerLedger:
    """Apply all verdicts of one sharing round at once.

    Every update is computed before the new ledger is built, so a failure
    leaves the input ledger as the only visible state.
    """
    records = dict(ledger.records)
    for advisor, verdict in verdicts:
        records[advisor] = _apply(records.get(advisor), advisor, verdict, x, params)
    return replace(ledger, records=records)


def seed_record(
    advisor: str,
    reputation: float,
    params: EngineParams,
    honest_count: int = 0,
    total_count: int = 0,
) -> AdvisorRecord:
    """Build a record for an already-known advisor, categorized by its reputation."""
    return AdvisorRecord(
        advisor,
        Rating(reputation),
        BehaviorStats(honest_count, total_count),
        categorize(reputation, params),
    )
