import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from heckescope.eigenform import FORMS, build_form  # noqa: E402

# filled by test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for key in list(os.environ):
        if key.startswith("HECKESCOPE_"):
            monkeypatch.delenv(key)


@pytest.fixture(scope="session")
def delta_small():
    return build_form("delta", 20_000)


@pytest.fixture(scope="session")
def delta_big():
    # covers x + y = 1.1 * 10^6 for the Sato-Tate sums
    return build_form("delta", 1_100_000)


@pytest.fixture(scope="session")
def small_tables():
    return {label: build_form(label, 20_000) for label in FORMS}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
