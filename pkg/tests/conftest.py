"""Shared fixtures; also prints the acceptance summary at the end of the run."""

import pytest

from padovan_repdigits.balls import DEFAULT_PREC

ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture(scope="session")
def prec():
    return DEFAULT_PREC


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE, key=lambda r: int(r[0].split()[1].rstrip(":"))):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name} {detail}")
