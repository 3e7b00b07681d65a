"""Shared pytest plumbing: the acceptance criteria summary.

Each acceptance test records exactly one pass/fail line through the
``criterion`` fixture; the terminal-summary hook replays them at the end
of the run so the verdict for every criterion is visible even when all
tests pass.
"""

import pytest

CRITERION_LINES: list[str] = []


@pytest.fixture(scope="session")
def criterion():
    def record(name: str, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        CRITERION_LINES.append(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
