"""Shared pytest wiring: the acceptance report collector.

Each acceptance test calls the ``acceptance`` fixture once with its verdict;
the lines are echoed immediately (visible with ``-s``) and repeated in the
terminal summary so they survive output capture.
"""
import pytest

_LINES: list[str] = []


@pytest.fixture
def acceptance():
    def report(number: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        _LINES.append(line)
        print(line)

    return report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
