import pytest

from repshare.casestudy import case_study_ledger, case_study_params
from repshare.core import EngineParams


@pytest.fixture
def params() -> EngineParams:
    return case_study_params()


@pytest.fixture
def cs_ledger(params):
    return case_study_ledger(params)


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(criterion: str, ok: bool, detail: str) -> None:
        lines[criterion] = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}"
        print(lines[criterion])
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines, key=lambda k: int(k.split()[0].lstrip("AC"))):
            terminalreporter.write_line(lines[key])
