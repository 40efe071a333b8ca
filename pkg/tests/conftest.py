from collections import defaultdict

import pytest

CRITERIA = {
    1: "dimensions and vertex counts of the six polytopes",
    2: "enumerated vertex sets equal closed-form catalogs",
    3: "independent classicality equality count",
    4: "decomposition round trip and PR-like rejection",
    5: "decomposer verdict agrees with exact LP membership",
    6: "single-party witness agrees with structural test",
    7: "linear two-time states give classical behaviors",
    8: "GYNI vertex separated from classical polytope",
}

_results: dict[int, list[tuple[str, str]]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[crit].append((report.nodeid.split("::")[-1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = marker.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        runs = _results.get(n)
        if not runs:
            continue
        failed = [name for name, outcome in runs if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n}: {status} - {CRITERIA[n]} ({len(runs) - len(failed)}/{len(runs)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)
