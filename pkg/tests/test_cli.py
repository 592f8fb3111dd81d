import json

import pytest

from repshare import data_path
from repshare.casestudy import case_study_ledger
from repshare.cli import main
from repshare.persistence import persist_ledger


def test_case_study_ok(capsys, tmp_path):
    assert main(["case-study", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "0.0092" in out and "0.3875" in out and "FAIL" not in out
    assert {p.name for p in tmp_path.iterdir()} == {"metrics.csv", "advisors.csv", "report.json"}
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["passed"] is True
    assert report["details"]["or_others"] == pytest.approx(0.387459, abs=1e-6)


def test_case_study_golden_failure(monkeypatch, capsys):
    import repshare.casestudy as cs

    monkeypatch.setitem(cs.GOLDEN, "m2", (0.5, 1e-6))
    assert main(["case-study"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_simulate(tmp_path, capsys):
    out = tmp_path / "run"
    code = main(["simulate", "--config", str(data_path("ballot_stuffing.json")), "--seed", "3",
                 "--out", str(out), "--verbose"])
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert len(report["traces"]) == 200
    assert report["scenario_digest"].startswith("sha256:")


def test_simulate_env_out_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("REPSHARE_OUT_DIR", str(tmp_path / "env"))
    assert main(["simulate", "--config", str(data_path("case_study.json")), "--format", "csv"]) == 0
    assert (tmp_path / "env" / "metrics.csv").exists()


def test_seed_override_changes_digest(tmp_path):
    cfg = str(data_path("case_study.json"))
    main(["simulate", "--config", cfg, "--out", str(tmp_path / "a"), "--format", "json"])
    main(["simulate", "--config", cfg, "--seed", "5", "--out", str(tmp_path / "b"), "--format", "json"])
    da = json.loads((tmp_path / "a" / "report.json").read_text())["scenario_digest"]
    db = json.loads((tmp_path / "b" / "report.json").read_text())["scenario_digest"]
    assert da != db


def test_simulate_invalid_config(tmp_path, capsys):
    bad = json.loads(data_path("case_study.json").read_text())
    bad["engine"]["penalty_p"] = 0.5
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    assert main(["simulate", "--config", str(path), "--out", str(tmp_path)]) == 1
    assert "penalty_p" in capsys.readouterr().err


def test_simulate_missing_config(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.json")]) == 2


def test_simulate_unwritable_out(tmp_path):
    blocker = tmp_path / "f"
    blocker.write_text("")
    assert main(["simulate", "--config", str(data_path("case_study.json")), "--out", str(blocker)]) == 2


def test_filter_with_ledger(tmp_path, capsys):
    ops = [{"advisor": a, "reported": v} for a, v in
           [("b1", 0.380), ("b3", 0.387), ("b5", 0.580), ("b7", 0.395)]]
    (tmp_path / "ops.json").write_text(json.dumps({"seller": "s4", "opinions": ops}))
    persist_ledger(case_study_ledger(), tmp_path / "ledger.json")
    code = main(["filter", "--opinions", str(tmp_path / "ops.json"), "--individual", "0.389",
                 "--ledger", str(tmp_path / "ledger.json"), "--json"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["verdicts"] == {"b1": "Honest", "b3": "Honest", "b5": "Dishonest", "b7": "Honest"}
    assert out["or_others"] == pytest.approx(0.38746, abs=1e-4)


def test_filter_without_ledger_uses_mean(tmp_path, capsys):
    (tmp_path / "ops.json").write_text(json.dumps([{"advisor": "a", "reported": 0.4}, {"advisor": "b", "reported": 0.4}]))
    assert main(["filter", "--opinions", str(tmp_path / "ops.json"), "--individual", "0.4"]) == 0
    out = capsys.readouterr().out
    assert "0.4000" in out and "unweighted" in out


def test_filter_empty(tmp_path, capsys):
    (tmp_path / "ops.json").write_text("[]")
    assert main(["filter", "--opinions", str(tmp_path / "ops.json"), "--individual", "0.4"]) == 1
    assert "no opinions to filter" in capsys.readouterr().err


def test_filter_truncated_ledger(tmp_path):
    (tmp_path / "ops.json").write_text(json.dumps([{"advisor": "a", "reported": 0.4}]))
    (tmp_path / "ledger.json").write_text('{"schema_version": 1, "records": [')
    assert main(["filter", "--opinions", str(tmp_path / "ops.json"), "--individual", "0.4",
                 "--ledger", str(tmp_path / "ledger.json")]) == 1
