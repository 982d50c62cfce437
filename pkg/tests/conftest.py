"""Shared fixtures and the acceptance-suite summary hook.

The acceptance tests live in test_acceptance.py as test_criterion_NN_*
functions; after the run, one PASS/FAIL line per criterion is printed so the
whole gate can be read at a glance.
"""

from __future__ import annotations

import re

import pytest

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


@pytest.fixture
def rng():
    import random

    return random.Random(20240817)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = {}
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            match = _CRITERION.search(getattr(report, "nodeid", ""))
            if not match:
                continue
            number, slug = match.groups()
            verdict = "PASS" if outcome == "passed" else "FAIL"
            lines[int(number)] = f"criterion {number} ({slug}): {verdict}"
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
