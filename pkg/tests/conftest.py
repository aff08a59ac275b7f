from collections import defaultdict

_results: dict = defaultdict(list)
_titles: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    _titles[number] = title
    _results[number].append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        status = "PASS" if all(_results[number]) else "FAIL"
        runs = len(_results[number])
        terminalreporter.write_line(f"[{status}] {number:2d}. {_titles[number]} ({runs} run(s))")
