import pytest

from repshare.aggregation import ExclusionReason
from repshare.casestudy import ADVISORS, case_study_opinions
from repshare.core import Opinion
from repshare.filtering import Label
from repshare.ledger import BuyerLedger, seed_record
from repshare.sharing import share_reputation
from repshare.solicitation import SolicitationPlan, select_advisors


def test_case_study_end_to_end(cs_ledger, params):
    plan = select_advisors(cs_ledger, ADVISORS, params, rng=0)
    updated, out = share_reputation(cs_ledger, plan, case_study_opinions(), 0.389, 1800, params)
    assert out.m2 == pytest.approx(0.0091505, abs=1e-9)
    assert [v.label for v in out.verdicts] == [Label.HONEST, Label.HONEST, Label.DISHONEST, Label.HONEST]
    assert out.result.aggregate == pytest.approx(0.38746, abs=1e-4)
    assert [c.advisor for c in out.result.contributors] == ["b1", "b3", "b7"]
    assert ("b4", ExclusionReason.BELOW_REP_THRESHOLD) in out.result.excluded
    assert ("b5", ExclusionReason.CLASSIFIED_DISHONEST) in out.result.excluded
    assert updated.records["b4"] == cs_ledger.records["b4"]


def test_weights_use_pre_round_history(cs_ledger, params):
    plan = select_advisors(cs_ledger, ADVISORS, params, rng=0)
    _, out = share_reputation(cs_ledger, plan, case_study_opinions(), 0.389, 1800, params)
    weights = {c.advisor: c.weight for c in out.result.contributors}
    assert weights["b1"] == pytest.approx(0.3960983953, abs=1e-9)


def test_insufficient_round_leaves_ledger(params):
    ledger = BuyerLedger("b0", {"b1": seed_record("b1", 0.5, params, 3, 4)}, 0.0)
    plan = SolicitationPlan(("b1",), frozenset(), 0.0)
    updated, out = share_reputation(ledger, plan, [Opinion("b1", "s", 0.5)], 0.5, 1800, params)
    assert out.aborted
    assert out.result.aggregate is None
    assert updated is ledger


def test_zero_responders(params):
    ledger = BuyerLedger("b0", {}, 1.0)
    updated, out = share_reputation(ledger, SolicitationPlan((), frozenset(), 1.0), [], 0.5, 1800, params)
    assert out.aborted and updated == ledger


def test_all_dishonest_round_still_updates(params):
    ledger = BuyerLedger("b0", {}, 1.0)
    plan = SolicitationPlan(("b1", "b2"), frozenset(), 1.0, frozenset({"b1", "b2"}))
    ops = [Opinion("b1", "s", 0.5), Opinion("b2", "s", 0.5)]
    updated, out = share_reputation(ledger, plan, ops, 0.4, 1800, params)
    assert not out.aborted
    assert out.result.aggregate is None
    assert all(r.stats.total_count == 1 for r in updated.records.values())
