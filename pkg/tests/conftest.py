import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lnperc.params import ModelParams  # noqa: E402

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Collect one summary line per acceptance criterion."""

    def _record(criterion: str, passed: bool, detail: str):
        _ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}")
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def fig4_params():
    return ModelParams(w0=1.0, phi=0.5, c=6.0, mu=4.0, n_nodes=20_000)
