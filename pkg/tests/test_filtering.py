import pytest
from hypothesis import given
from hypothesis import strategies as st

from repshare.core import Opinion
from repshare.filtering import EmptyOpinionsError, Label, classify, second_moment

CASE_OPINIONS = {"b1": 0.380, "b3": 0.387, "b5": 0.580, "b7": 0.395}
R = 0.389

ratings = st.floats(0.0, 0.999, allow_nan=False)


def opinions(values):
    return [Opinion(f"b{i}", "s", v) for i, v in enumerate(values)]


def brute_force_m2(values, r):
    total = 0.0
    count = 0
    for v in values:
        d = v - r
        total += d * d
        count += 1
    return total / count


class TestSecondMoment:
    def test_case_study(self):
        m2 = second_moment(list(CASE_OPINIONS.values()), R)
        assert m2 == pytest.approx(0.0091505, abs=1e-12)
        assert round(m2, 4) == 0.0092

    def test_excluding_b4_matters(self):
        with_b4 = second_moment([*CASE_OPINIONS.values(), 0.49], R)
        assert with_b4 == pytest.approx(0.0093606, abs=1e-9)

    def test_all_equal(self):
        assert second_moment([0.5, 0.5, 0.5], 0.5) == 0.0

    def test_single(self):
        assert second_moment([0.5], 0.3) == pytest.approx(0.04, abs=1e-15)

    def test_empty(self):
        with pytest.raises(EmptyOpinionsError, match="no opinions to filter"):
            second_moment([], 0.5)

    @given(st.lists(ratings, min_size=1, max_size=20), ratings)
    def test_matches_fold(self, values, r):
        assert second_moment(values, r) == pytest.approx(brute_force_m2(values, r), abs=1e-12)
        assert second_moment(values, r) >= 0

    @given(st.lists(st.floats(0.2, 0.6), min_size=1, max_size=10), st.floats(0.2, 0.6), st.floats(-0.2, 0.3))
    def test_translation(self, values, r, shift):
        shifted = [v + shift for v in values]
        assert second_moment(shifted, r + shift) == pytest.approx(second_moment(values, r), abs=1e-12)

    @given(st.lists(ratings, min_size=1, max_size=10), ratings, st.data())
    def test_more_distant_outlier_never_decreases(self, values, r, data):
        i = data.draw(st.integers(0, len(values) - 1))
        d = abs(values[i] - r)
        further = data.draw(st.floats(d, 1.0).filter(lambda f: 0 <= r + f < 1 or 0 <= r - f < 1))
        replacement = r + further if r + further < 1 else r - further
        changed = list(values)
        changed[i] = replacement
        assert second_moment(changed, r) >= second_moment(values, r) - 1e-15


class TestClassify:
    def test_case_study_pattern(self, params):
        ops = [Opinion(a, "s4", v) for a, v in CASE_OPINIONS.items()]
        verdicts = classify(ops, R, params)
        assert [v.label for v in verdicts] == [Label.HONEST, Label.HONEST, Label.DISHONEST, Label.HONEST]
        assert [v.opinion.advisor for v in verdicts] == list(CASE_OPINIONS)
        assert verdicts[2].deviation == pytest.approx(0.191)

    def test_all_equal_to_individual(self, params):
        verdicts = classify(opinions([0.4] * 4), 0.4, params)
        assert all(v.honest for v in verdicts)

    def test_identical_deviation_pathology(self, params):
        # m2 = 0.01 < |d| = 0.1 for every opinion
        verdicts = classify(opinions([0.5] * 4), 0.4, params)
        assert all(v.label is Label.DISHONEST for v in verdicts)

    def test_low_outlier_is_dishonest(self, params):
        verdicts = classify(opinions([0.40, 0.39, 0.05]), 0.40, params)
        assert [v.honest for v in verdicts] == [True, True, False]

    def test_single_opinion(self, params):
        assert classify(opinions([0.3]), 0.3, params)[0].honest
        assert not classify(opinions([0.35]), 0.3, params)[0].honest

    def test_empty(self, params):
        with pytest.raises(EmptyOpinionsError):
            classify([], 0.5, params)

    @given(st.lists(ratings, min_size=1, max_size=15), ratings)
    def test_partition(self, values, r):
        from repshare.casestudy import case_study_params

        params = case_study_params()
        ops = opinions(values)
        verdicts = classify(ops, r, params)
        assert [v.opinion for v in verdicts] == ops
        m2 = second_moment(values, r)
        honest = {v.opinion.advisor for v in verdicts if v.honest}
        dishonest = {v.opinion.advisor for v in verdicts if not v.honest}
        assert honest | dishonest == {o.advisor for o in ops}
        assert not honest & dishonest
        for v in verdicts:
            assert v.honest == (abs(v.deviation) <= m2 + params.classify_eps)
