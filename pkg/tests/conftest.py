"""Collects the release-gate criteria results and prints one PASS/FAIL line
per criterion in the terminal summary, where pytest's output capture cannot
swallow it."""

import pytest

_RESULTS: dict[str, tuple[bool, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    cid, description = marker.args
    if report.when == "call":
        _RESULTS[cid] = (report.passed, description)
    elif report.failed:  # setup/teardown crash still counts as a failure
        _RESULTS[cid] = (False, description)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_RESULTS, key=lambda c: int(c.lstrip("C"))):
        passed, description = _RESULTS[cid]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {cid} {verdict}: {description}")
