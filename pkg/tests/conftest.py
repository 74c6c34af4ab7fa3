import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: list[tuple[str, str, float]] = []


@contextmanager
def _criterion(label: str):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        status = "PASS"
    finally:
        _CRITERIA.append((label, status, time.perf_counter() - start))


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, elapsed in _CRITERIA:
        terminalreporter.write_line(f"{status}  {label}  ({elapsed:.2f}s)")
