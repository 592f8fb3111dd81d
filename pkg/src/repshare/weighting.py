"""Advisor opinion weights derived from past behaviour."""

from __future__ import annotations

from dataclasses import dataclass

from .core import RATING_MAX, EngineParams, bounded_growth


@dataclass(frozen=True)
class BehaviorStats:
    """Honest and total opinion counts an advisor has on record with one buyer."""

    honest_count: int = 0
    total_count: int = 0

    def __post_init__(self) -> None:
        if self.honest_count < 0 or self.total_count < 0:
            raise ValueError("opinion counts must be non-negative")
        if self.honest_count > self.total_count:
            raise ValueError(
                f"honest_count {self.honest_count} exceeds total_count {self.total_count}"
            )


def percent_hpo(stats: BehaviorStats) -> float:
    """Percentage (0-100) of honest past opinions; 0 for an empty history."""
    if stats.total_count == 0:
        return 0.0
    return stats.honest_count / stats.total_count * 100.0


def incentive_j(honest_count: int, j_step: float) -> float:
    """Honesty incentive multiplier, starting at 1 and growing by ``j_step`` per honest opinion.

    Derived from the count rather than stored, so dishonest opinions never
    reset it.
    """
    return 1.0 + j_step * honest_count


def consolidated_zeta(stats: BehaviorStats, params: EngineParams) -> float:
    """Combine honesty percentage and honest count (scaled by the incentive) into one score."""
    j = incentive_j(stats.honest_count, params.j_step)
    return (
        params.alpha_hat * percent_hpo(stats)
        + params.epsilon_hat * stats.honest_count * j
    )


def weight(zeta: float, params: EngineParams) -> float:
    """Map a behaviour score to an opinion weight in [0, 1)."""
    if zeta < 0:
        raise ValueError(f"zeta must be non-negative, got {zeta!r}")
    return min(bounded_growth(params.kappa, zeta, params.exp_base), RATING_MAX)


def advisor_weight(stats: BehaviorStats, params: EngineParams) -> float:
    return weight(consolidated_zeta(stats, params), params)
