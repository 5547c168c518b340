"""Prints one verdict line per acceptance criterion at the end of the run."""

import re

_VERDICTS = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _VERDICTS[n] = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]


def pytest_terminal_summary(terminalreporter):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_VERDICTS):
        terminalreporter.write_line(f"criterion {n}: {_VERDICTS[n]}")
