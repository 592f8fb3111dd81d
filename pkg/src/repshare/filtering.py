"""Unfair-opinion filter.

Received opinions are compared against the buyer's own experience of the
seller. The second moment of the opinions about that individual rating is
the round's tolerance: an opinion whose absolute deviation from the
individual rating does not exceed it is honest, anything further away is
dishonest.

Note the tolerance is a squared quantity compared against a linear one.
When every opinion deviates by the same nonzero amount ``d`` (``0 < |d| < 1``)
the tolerance is ``d**2 < |d|`` and the whole round is labelled dishonest.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass

from .core import EngineParams, Opinion, ReputationError


class EmptyOpinionsError(ReputationError, ValueError):
    def __init__(self) -> None:
        super().__init__("no opinions to filter")


class Label(str, enum.Enum):
    HONEST = "Honest"
    DISHONEST = "Dishonest"


@dataclass(frozen=True)
class FilterVerdict:
    opinion: Opinion
    label: Label
    deviation: float  # signed, reported - individual

    @property
    def honest(self) -> bool:
        return self.label is Label.HONEST


def second_moment(opinions: Sequence[float], individual: float) -> float:
    """Mean squared deviation of ``opinions`` about ``individual``."""
    if len(opinions) == 0:
        raise EmptyOpinionsError()
    r = float(individual)
    return math.fsum((float(sr) - r) ** 2 for sr in opinions) / len(opinions)


def classify(
    opinions: Sequence[Opinion], individual: float, params: EngineParams
) -> list[FilterVerdict]:
    """Label each opinion Honest or Dishonest against the round's second moment.

    The moment is computed once over the full input; verdicts keep input order.
    """
    m2 = second_moment([o.reported for o in opinions], individual)
    limit = m2 + params.classify_eps
    r = float(individual)
    verdicts = []
    for o in opinions:
        d = float(o.reported) - r
        label = Label.HONEST if abs(d) <= limit else Label.DISHONEST
        verdicts.append(FilterVerdict(o, label, d))
    return verdicts
