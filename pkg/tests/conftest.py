"""Shared fixtures and the acceptance summary printed at the end of every run."""

from __future__ import annotations

import time

import pytest

_ACCEPTANCE: dict[int, dict] = {}


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion check")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item: pytest.Item):
    start = time.perf_counter()
    yield
    item.user_properties.append(("elapsed", time.perf_counter() - start))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call: pytest.CallInfo):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    entry = _ACCEPTANCE.setdefault(number, {"title": title, "passed": True, "ran": False, "elapsed": 0.0})
    if report.when == "call" or (report.when == "setup" and report.failed):
        entry["ran"] = True
        entry["passed"] = entry["passed"] and report.passed
        entry["elapsed"] += dict(item.user_properties).get("elapsed", 0.0)


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        e = _ACCEPTANCE[number]
        status = "PASS" if e["ran"] and e["passed"] else ("FAIL" if e["ran"] else "NOT RUN")
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {e['title']}  ({e['elapsed']:.1f}s)")
