import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

TRACE_X0 = "10100"
TRACE_M_PARITIES = [0, 1, 0]  # with c=4: m = 4, 5, 4
TRACE_S = [2, 4, 2, 2, 5, 1, 1, 5, 5, 3, 2, 3, 3]


@pytest.fixture
def trace_streams():
    """(prng1 values, prng2 values) reproducing the running example."""
    return list(TRACE_M_PARITIES), [s - 1 for s in TRACE_S]


@pytest.fixture
def trace_script():
    return Path(__file__).parent / "table1.streams"


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
