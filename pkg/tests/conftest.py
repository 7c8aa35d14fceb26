import pytest

# (number, description) -> "PASS" / "FAIL", filled in by the report hook below.
_CRITERIA: dict[tuple[int, str], str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = tuple(mark.args)
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _CRITERIA[key] = "PASS" if rep.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, text), verdict in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {number} {verdict}: {text}")
