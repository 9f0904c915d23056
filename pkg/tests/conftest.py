import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, text): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        cid, text = marker.args
        _results[item.nodeid] = (cid, text, rep.passed, rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for cid, text, passed, duration in sorted(_results.values(), key=lambda r: r[0]):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {cid:<3s} {status}  {text}  ({duration:.2f}s)")
