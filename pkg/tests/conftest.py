"""Prints one line per acceptance criterion after the run."""

from __future__ import annotations

import re

_CRITERION = re.compile(r"test_criterion_(\d+)")


def pytest_terminal_summary(terminalreporter):
    rows = {}
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            m = _CRITERION.search(getattr(rep, "nodeid", ""))
            if not m or (rep.when != "call" and rep.passed):
                continue
            n = int(m.group(1))
            detail = dict(rep.user_properties).get("detail", "")
            verdict = "PASS" if rep.passed else "FAIL"
            if rows.get(n, ("PASS",))[0] == "PASS":
                rows[n] = (verdict, detail)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for n, (verdict, detail) in sorted(rows.items()):
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {detail}")
