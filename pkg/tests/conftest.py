import pytest

_RESULTS = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    key = marker.args[0]
    passed = call.excinfo is None
    _RESULTS[key] = _RESULTS.get(key, True) and passed


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_RESULTS, key=str):
        status = "PASS" if _RESULTS[key] else "FAIL"
        terminalreporter.write_line(f"criterion {key}: {status}")


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20181026)
