"""Choosing which advisors to ask, and which of their answers to accept."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .aggregation import ExclusionReason
from .core import AdvisorCategory, EngineParams, Opinion
from .ledger import BuyerLedger


class ResponsePolicy(str, enum.Enum):
    MUST_RESPOND = "MustRespond"
    MAY_DECLINE = "MayDecline"


@dataclass(frozen=True)
class SolicitationPlan:
    targets: tuple[str, ...]
    tiers_used: frozenset[AdvisorCategory]
    delta_used: float
    explored: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Admission:
    admitted: tuple[Opinion, ...]
    excluded: tuple[tuple[Opinion, ExclusionReason], ...]
    min_advisors: int

    @property
    def sufficient(self) -> bool:
        """False signals the round must abort with no shared reputation."""
        return len(self.admitted) >= self.min_advisors


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def select_advisors(
    ledger: BuyerLedger,
    known_advisors: Iterable[str],
    params: EngineParams,
    rng: np.random.Generator | int | None = None,
) -> SolicitationPlan:
    """Plan one solicitation round for the ledger's owner.

    Every reputed advisor is asked. Non-reputed advisors are added only when
    the reputed tier is smaller than ``min_advisors``. Independently, each
    reachable agent that is unknown to the ledger or still New is asked with
    probability ``ledger.delta``. Dis-reputed advisors are never asked.

    Args:
        ledger: The requesting buyer's advisor records.
        known_advisors: Every agent the buyer could reach this round.
        params: Engine constants.
        rng: Generator or seed; candidates are drawn in sorted id order,
            so the plan is a pure function of (ledger, candidates, seed).
    """
    gen = _as_rng(rng)
    reputed = ledger.members(AdvisorCategory.REPUTED)
    targets = list(reputed)
    tiers = set()
    if reputed:
        tiers.add(AdvisorCategory.REPUTED)
    if len(reputed) < params.min_advisors:
        non_reputed = ledger.members(AdvisorCategory.NON_REPUTED)
        if non_reputed:
            tiers.add(AdvisorCategory.NON_REPUTED)
        targets.extend(non_reputed)

    explored = []
    pool = sorted(
        a
        for a in set(known_advisors)
        if a != ledger.owner
        and ledger.category_of(a) in (None, AdvisorCategory.NEW)
    )
    if pool:
        draws = gen.random(len(pool))
        explored = [a for a, u in zip(pool, draws) if u < ledger.delta]
    if explored:
        tiers.add(AdvisorCategory.NEW)
    targets.extend(explored)
    return SolicitationPlan(tuple(targets), frozenset(tiers), ledger.delta, frozenset(explored))


def admit_opinions(
    plan: SolicitationPlan,
    received: Sequence[Opinion],
    ledger: BuyerLedger,
    params: EngineParams,
) -> Admission:
    """Drop opinions the buyer must not use, keeping arrival order.

    Dis-reputed senders are always dropped. When enough reputed advisors
    answered, senders below the reputation threshold are dropped too, except
    those recruited by exploration this round.
    """
    reputed_answers = sum(
        1
        for o in received
        if ledger.category_of(o.advisor) is AdvisorCategory.REPUTED
    )
    reputed_suffices = reputed_answers >= params.min_advisors
    admitted, excluded = [], []
    for o in received:
        category = ledger.category_of(o.advisor)
        if category is AdvisorCategory.DIS_REPUTED:
            excluded.append((o, ExclusionReason.DIS_REPUTED_SENDER))
        elif (
            reputed_suffices
            and o.advisor not in plan.explored
            and ledger.reputation_of(o.advisor) < params.rep_threshold
        ):
            excluded.append((o, ExclusionReason.BELOW_REP_THRESHOLD))
        else:
            admitted.append(o)
    return Admission(tuple(admitted), tuple(excluded), params.min_advisors)


def decay_delta(delta: float, params: EngineParams) -> float:
    return max(params.delta_floor, delta * params.delta_rate)


def respond_policy(responder_ledger: BuyerLedger, requester: str) -> ResponsePolicy:
    """Reputed advisors of the responder are always answered."""
    if responder_ledger.category_of(requester) is AdvisorCategory.REPUTED:
        return ResponsePolicy.MUST_RESPOND
    return ResponsePolicy.MAY_DECLINE
