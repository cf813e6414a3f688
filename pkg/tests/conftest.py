"""Shared test plumbing.

The acceptance tests record one PASS/FAIL line per criterion here; the
terminal-summary hook prints them after the run, outside pytest's output
capture, so the lines always appear in the log.
"""

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
