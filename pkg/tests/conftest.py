import pytest

from geobracket.surface import builtin

RESULTS: list[tuple[int, bool, str]] = []


@pytest.fixture(scope="session")
def pants():
    return builtin("pants")


@pytest.fixture(scope="session")
def torus():
    return builtin("holed-torus")


@pytest.fixture(scope="session", params=["pants", "holed-torus"])
def surface(request):
    return builtin(request.param)


@pytest.fixture
def record():
    """Log one acceptance line; it is printed now and again in the summary."""

    def _record(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(line)
        RESULTS.append((number, ok, line))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in sorted(RESULTS):
        terminalreporter.write_line(line)
