"""Shared fixtures: the acceptance suite reports one line per criterion."""

import pytest

_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Call ``criterion(number, title, ok, detail)`` once per acceptance test."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
        print(line)
        _LINES.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
