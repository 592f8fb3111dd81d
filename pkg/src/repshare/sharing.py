"""One complete reputation-sharing round for a single requesting buyer.

admit -> filter -> weight -> aggregate -> update advisor records.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

from .aggregation import (
    Contributor,
    ExclusionReason,
    SharedReputationResult,
    aggregate_contributors,
)
from .core import EngineParams, Opinion, Rating
from .filtering import FilterVerdict, classify, second_moment
from .ledger import BuyerLedger, omega, phi, record_round
from .solicitation import Admission, SolicitationPlan, admit_opinions
from .weighting import BehaviorStats, advisor_weight


@dataclass(frozen=True)
class SharingOutcome:
    individual: Rating
    admission: Admission
    m2: float | None = None
    verdicts: tuple[FilterVerdict, ...] = ()
    result: SharedReputationResult = field(default_factory=lambda: SharedReputationResult(None))
    omega: float = 0.0
    phi: float = 0.0

    @property
    def aborted(self) -> bool:
        return not self.admission.sufficient


def share_reputation(
    ledger: BuyerLedger,
    plan: SolicitationPlan,
    received: Sequence[Opinion],
    individual: float,
    x: float,
    params: EngineParams,
) -> tuple[BuyerLedger, SharingOutcome]:
    """Run Part II of the methodology over the opinions a buyer received.

    Weights come from the advisor records as they stood before this round.
    If fewer than ``min_advisors`` opinions are admitted the round aborts and
    the ledger is returned unchanged.
    """
    individual = Rating(individual)
    admission = admit_opinions(plan, received, ledger, params)
    excluded = [(o.advisor, reason) for o, reason in admission.excluded]
    w_up, w_down = omega(x, params), phi(x, params)
    if not admission.sufficient:
        outcome = SharingOutcome(
            individual,
            admission,
            result=SharedReputationResult(None, (), tuple(excluded)),
            omega=w_up,
            phi=w_down,
        )
        return ledger, outcome

    admitted = list(admission.admitted)
    m2 = second_moment([o.reported for o in admitted], individual)
    verdicts = classify(admitted, individual, params)
    contributors = []
    for v in verdicts:
        if v.honest:
            rec = ledger.get(v.opinion.advisor)
            stats = rec.stats if rec is not None else BehaviorStats()
            contributors.append(
                Contributor(v.opinion.advisor, advisor_weight(stats, params), v.opinion.reported)
            )
        else:
            excluded.append((v.opinion.advisor, ExclusionReason.CLASSIFIED_DISHONEST))
    result = aggregate_contributors(contributors, excluded)
    updated = record_round(
        ledger, [(v.opinion.advisor, v.label) for v in verdicts], x, params
    )
    outcome = SharingOutcome(individual, admission, m2, tuple(verdicts), result, w_up, w_down)
    return updated, outcome
