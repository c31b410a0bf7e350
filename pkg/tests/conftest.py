"""Shared pytest wiring: a visible verdict line per acceptance criterion."""

import re

_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if m:
                rows[int(m.group(1))] = outcome
    if not rows:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for num in sorted(rows):
        verdict = "PASS" if rows[num] == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {num}: {verdict}")
