import numpy as np
import pytest

from imbaleval import ScoredDataset

_CRITERIA: list[tuple[int, str, bool, str]] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def separable():
    return ScoredDataset.from_arrays([0.9, 0.8, 0.3, 0.2], [True, True, False, False])


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome, then assert it."""

    def check(number: int, text: str, ok: bool, detail: str = "") -> None:
        _CRITERIA.append((number, text, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text} {detail}".rstrip())
        assert ok, f"criterion {number} failed: {text} {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, text, ok, detail in sorted(_CRITERIA):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {text} {detail}".rstrip())
