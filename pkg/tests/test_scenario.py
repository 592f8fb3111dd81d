import json

import pytest

from repshare import data_path
from repshare.scenario import (
    ScenarioParseError,
    parse_scenario,
    scenario_digest,
    scenario_from_dict,
    scenario_to_dict,
)
from repshare.simulation import BehaviorKind, ScenarioError


def write(tmp_path, obj, name="s.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj), encoding="utf-8")
    return path


@pytest.fixture
def shipped():
    return json.loads(data_path("case_study.json").read_text())


def test_shipped_case_study(params):
    cfg = parse_scenario(data_path("case_study.json"))
    assert cfg.engine == params
    assert cfg.transaction_value.kind == "fixed" and cfg.transaction_value.x == 1800
    assert len(cfg.buyers) == 8 and len(cfg.sellers) == 5
    b5 = next(a for a in cfg.agents if a.id == "b5")
    assert b5.behavior.kind is BehaviorKind.BALLOT_STUFFER and b5.behavior.targets == {"s4"}


@pytest.mark.parametrize("name", ["case_study.json", "ballot_stuffing.json", "bad_mouthing.json"])
def test_shipped_scenarios_round_trip(name):
    cfg = parse_scenario(data_path(name))
    assert scenario_from_dict(scenario_to_dict(cfg)) == cfg


def test_penalty_rejected(tmp_path, shipped):
    shipped["engine"]["penalty_p"] = 0.5
    with pytest.raises(ScenarioError, match="penalty_p must be ≥ 1"):
        parse_scenario(write(tmp_path, shipped))


def test_empty_file(tmp_path):
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario(write(tmp_path, ""))
    assert info.value.line == 1


def test_syntax_error_position(tmp_path):
    with pytest.raises(ScenarioParseError) as info:
        parse_scenario(write(tmp_path, '{\n  "rounds": 3,\n  oops\n}'))
    assert info.value.line == 3
    assert ":3:" in str(info.value)


def test_unknown_keys_rejected(tmp_path, shipped):
    shipped["colour"] = "blue"
    shipped["engine"]["gamma"] = 2
    shipped["agents"][0]["mood"] = "happy"
    with pytest.raises(ScenarioError) as info:
        parse_scenario(write(tmp_path, shipped))
    text = str(info.value)
    assert "'colour'" in text and "'gamma'" in text and "'mood'" in text


def test_full_engine_error_list(tmp_path, shipped):
    shipped["engine"].update(penalty_p=0.5, kappa=0.0, exp_base=0.9)
    with pytest.raises(ScenarioError) as info:
        parse_scenario(write(tmp_path, shipped))
    assert len(info.value.errors) == 3


def test_engine_errors_reported_alongside_structural(tmp_path, shipped):
    shipped["rounds"] = "many"
    shipped["engine"]["penalty_p"] = 0.5
    with pytest.raises(ScenarioError) as info:
        parse_scenario(write(tmp_path, shipped))
    assert any("rounds" in e for e in info.value.errors)
    assert any("penalty_p" in e for e in info.value.errors)


def test_schema_version(tmp_path, shipped):
    shipped["schema_version"] = 99
    with pytest.raises(ScenarioError, match="schema_version"):
        parse_scenario(write(tmp_path, shipped))


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        parse_scenario(tmp_path / "nope.json")


def test_digest_tracks_content():
    base = parse_scenario(data_path("case_study.json"))
    from dataclasses import replace

    assert scenario_digest(base) == scenario_digest(replace(base))
    assert scenario_digest(base) != scenario_digest(replace(base, seed=base.seed + 1))
