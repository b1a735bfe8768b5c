"""Prints one pass/fail line per acceptance criterion after the run."""
import re

_CRITERION = re.compile(r"test_criterion_(\d+)")
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    match = _CRITERION.search(report.nodeid)
    if not match or (report.when != "call" and not report.failed):
        return
    number = int(match.group(1))
    summary = dict(report.user_properties).get("summary", "")
    if report.failed and not summary:
        summary = f"error during {report.when}"
    _results[number] = ("PASS" if report.passed else "FAIL", summary)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_results):
        verdict, summary = _results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {summary}".rstrip())
