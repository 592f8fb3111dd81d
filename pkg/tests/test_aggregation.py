from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from repshare.aggregation import (
    Contributor,
    ExclusionReason,
    NoHonestOpinionsError,
    ZeroWeightWarning,
    aggregate,
    aggregate_contributors,
)
from repshare.core import Rating
from repshare.weighting import BehaviorStats, advisor_weight

weights = st.floats(1e-6, 0.999)
ratings = st.floats(0.0, 0.999)
pairs = st.lists(st.tuples(weights, ratings), min_size=1, max_size=20)


def exact(pairs):
    num = sum(Fraction(w) * Fraction(sr) for w, sr in pairs)
    den = sum(Fraction(w) for w, _ in pairs)
    return num / den


def test_case_study_aggregate(params):
    honest = [
        (advisor_weight(BehaviorStats(20, 26), params), 0.380),
        (advisor_weight(BehaviorStats(14, 17), params), 0.387),
        (advisor_weight(BehaviorStats(9, 10), params), 0.395),
    ]
    value = aggregate(honest)
    assert value == pytest.approx(0.38746, abs=1e-4)
    assert round(value, 4) == 0.3875


def test_equal_weights_mean():
    assert aggregate([(0.3, 0.2), (0.3, 0.4), (0.3, 0.6)]) == pytest.approx(0.4, abs=1e-15)


@pytest.mark.parametrize("w", [1e-9, 0.2, 0.99])
def test_single_opinion(w):
    assert aggregate([(w, 0.7)]) == 0.7


def test_empty_raises():
    with pytest.raises(NoHonestOpinionsError, match="no honest opinions"):
        aggregate([])


def test_zero_weights_fall_back_to_mean():
    with pytest.warns(ZeroWeightWarning):
        value = aggregate([(0.0, 0.2), (0.0, 0.6)])
    assert value == pytest.approx(0.4)


def test_contributors_sorted_and_flagged():
    result = aggregate_contributors(
        [Contributor("b7", 0.0, Rating(0.3)), Contributor("b1", 0.0, Rating(0.5))],
        [("b5", ExclusionReason.CLASSIFIED_DISHONEST)],
    )
    assert [c.advisor for c in result.contributors] == ["b1", "b7"]
    assert result.unweighted_fallback
    assert result.aggregate == pytest.approx(0.4)
    assert result.excluded == (("b5", ExclusionReason.CLASSIFIED_DISHONEST),)


def test_no_contributors_is_absent():
    result = aggregate_contributors([])
    assert result.aggregate is None and not result.present


@given(pairs)
def test_convex(ps):
    value = aggregate(ps)
    assert min(sr for _, sr in ps) <= value <= max(sr for _, sr in ps)


@given(pairs, st.floats(1e-3, 1e3))
def test_scale_invariant(ps, c):
    scaled = [(w * c, sr) for w, sr in ps]
    assert aggregate(scaled) == pytest.approx(aggregate(ps), abs=1e-12)


@given(pairs, st.randoms(use_true_random=False))
def test_permutation_invariant(ps, rnd):
    shuffled = list(ps)
    rnd.shuffle(shuffled)
    assert aggregate(shuffled) == pytest.approx(aggregate(ps), abs=1e-12)


@given(pairs)
def test_matches_rational_arithmetic(ps):
    assert abs(float(aggregate(ps)) - float(exact(ps))) <= 1e-10
