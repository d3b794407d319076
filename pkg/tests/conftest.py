from collections import defaultdict

import pytest

_RESULTS: dict[int, dict[str, str]] = defaultdict(dict)
_TITLES: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    _TITLES[n] = title
    if report.when == "setup" and report.outcome != "passed":
        _RESULTS[n][item.name] = "FAIL"
    elif report.when == "call":
        _RESULTS[n][item.name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        checks = _RESULTS[n]
        failed = [name for name, res in checks.items() if res == "FAIL"]
        verdict = "FAIL" if failed else "PASS"
        detail = f" (failed: {', '.join(failed)})" if failed else ""
        tr.write_line(f"criterion {n:2d} {verdict}  {_TITLES[n]}  [{len(checks) - len(failed)}/{len(checks)} checks]{detail}")
