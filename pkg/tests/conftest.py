"""Shared test plumbing: prints one line per acceptance criterion at the end."""

import re


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    rows = []
    for status in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(status, []):
            nodeid = getattr(rep, "nodeid", "")
            m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", nodeid)
            if m:
                rows.append((int(m.group(1)), m.group(2), status))
    if not rows:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for num, name, status in sorted(rows):
        verdict = "PASS" if status == "passed" else "FAIL"
        terminalreporter.write_line(f"  criterion {num:2d} ({name.replace('_', ' ')}): {verdict}")
