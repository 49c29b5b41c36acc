"""Shared pytest hooks."""

import sys


def pytest_terminal_summary(terminalreporter):
    # test_acceptance records one verdict line per criterion; echo them
    # after the run so the pass/fail ledger survives output capture.
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "VERDICT_LINES", None) if mod else None
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
