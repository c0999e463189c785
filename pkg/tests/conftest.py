from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE = pytest.StashKey[list]()


def load_ml_table():
    rows = []
    for line in (FIXTURES / "ml_table.txt").read_text().splitlines():
        if line.startswith("#") or not line.strip():
            continue
        a, b, zr, zi, er, ei = map(float, line.split())
        rows.append((a, b, complex(zr, zi), complex(er, ei)))
    return rows


@pytest.fixture(scope="session")
def ml_table():
    return load_ml_table()


@pytest.fixture
def acceptance_log(request):
    """Collects one summary line per acceptance criterion for the terminal report."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
