import pytest

RESULTS = {}


@pytest.fixture
def criterion(request):
    """Call with (number, ok, detail); records the line and fails the test when not ok."""
    def record(number: int, ok: bool, detail: str = ""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        RESULTS[number] = line
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
