import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.failed:
        _results[int(m.group(1))] = ("PASS" if report.passed else "FAIL", m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        status, label = _results[key]
        terminalreporter.write_line(f"criterion {key:2d}: {status}  {label}")
