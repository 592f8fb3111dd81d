"""Weighted aggregation of honest opinions into the shared reputation of a seller."""

from __future__ import annotations

import enum
import math
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .core import Rating, ReputationError, clamp_rating


class NoHonestOpinionsError(ReputationError):
    """No honest opinion survived filtering; the buyer relies on its own experience."""

    def __init__(self) -> None:
        super().__init__("no honest opinions")


class ZeroWeightWarning(UserWarning):
    """Every contributor had zero weight; the unweighted mean was used."""


class ExclusionReason(str, enum.Enum):
    DIS_REPUTED_SENDER = "DisReputedSender"
    BELOW_REP_THRESHOLD = "BelowRepThreshold"
    CLASSIFIED_DISHONEST = "ClassifiedDishonest"


@dataclass(frozen=True)
class Contributor:
    advisor: str
    weight: float
    reported: Rating


@dataclass(frozen=True)
class SharedReputationResult:
    """Outcome of one aggregation. ``aggregate`` is None when no honest opinion remained."""

    aggregate: Rating | None
    contributors: tuple[Contributor, ...] = ()
    excluded: tuple[tuple[str, ExclusionReason], ...] = ()
    unweighted_fallback: bool = False

    @property
    def present(self) -> bool:
        return self.aggregate is not None


def _weighted_mean(pairs: Sequence[tuple[float, float]]) -> tuple[float, bool]:
    total = math.fsum(w for w, _ in pairs)
    if total == 0.0:
        return math.fsum(sr for _, sr in pairs) / len(pairs), True
    value = math.fsum(w * sr for w, sr in pairs) / total
    # Keep the convexity guarantee exact under rounding.
    lo = min(sr for _, sr in pairs)
    hi = max(sr for _, sr in pairs)
    return min(max(value, lo), hi), False


def aggregate(honest: Sequence[tuple[float, float]]) -> Rating:
    """Weighted mean ``sum(w * sr) / sum(w)`` of ``(weight, reported)`` pairs.

    Sums are correctly rounded (``math.fsum``), so the result does not
    depend on input order.

    Raises:
        NoHonestOpinionsError: if ``honest`` is empty.

    Warns:
        ZeroWeightWarning: when all weights are zero and the plain mean is returned.
    """
    if len(honest) == 0:
        raise NoHonestOpinionsError()
    value, fallback = _weighted_mean(honest)
    if fallback:
        warnings.warn("all weights are zero; using unweighted mean", ZeroWeightWarning, stacklevel=2)
    return clamp_rating(value)


def aggregate_contributors(
    contributors: Iterable[Contributor],
    excluded: Iterable[tuple[str, ExclusionReason]] = (),
) -> SharedReputationResult:
    """Aggregate honest contributors in ascending advisor-id order.

    An empty contributor set yields an absent aggregate instead of raising.
    """
    ordered = tuple(sorted(contributors, key=lambda c: c.advisor))
    excluded = tuple(excluded)
    if not ordered:
        return SharedReputationResult(None, (), excluded)
    value, fallback = _weighted_mean([(c.weight, float(c.reported)) for c in ordered])
    return SharedReputationResult(clamp_rating(value), ordered, excluded, fallback)
