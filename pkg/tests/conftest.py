"""Collects acceptance outcomes and prints one summary line per criterion."""

import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    props = dict(item.user_properties)
    _RESULTS[number] = {
        "title": title,
        "passed": rep.passed,
        "detail": props.get("detail", ""),
        "info": [v for k, v in item.user_properties if k == "info"],
    }


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        r = _RESULTS[number]
        status = "PASS" if r["passed"] else "FAIL"
        tr.write_line(f"criterion {number} [{status}] {r['title']}: {r['detail']}")
        for line in r["info"]:
            tr.write_line(f"    info: {line}")
