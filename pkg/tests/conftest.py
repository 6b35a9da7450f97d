import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from thzvlc.scenario import default_config, default_scenario  # noqa: E402


@pytest.fixture
def scenario():
    return default_scenario()


@pytest.fixture
def config():
    return default_config()


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    def record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
