import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Print and remember one pass/fail line per acceptance criterion."""
    def emit(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        print(line)
        ACCEPTANCE_LINES.append(line)
        assert ok, line
    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
