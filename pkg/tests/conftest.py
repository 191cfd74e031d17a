"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_OUTCOMES = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    number, title = marker.args
    entry = _OUTCOMES.setdefault(number, {"title": title, "passed": True, "notes": []})
    if report.failed:
        entry["passed"] = False
    if report.when == "call":
        for key, value in item.user_properties:
            if key == "measured":
                entry["notes"].append(value)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        entry = _OUTCOMES[number]
        status = "PASS" if entry["passed"] else "FAIL"
        notes = "; ".join(entry["notes"])
        line = f"[{status}] criterion {number}: {entry['title']}"
        terminalreporter.write_line(line + (f"  ({notes})" if notes else ""))
