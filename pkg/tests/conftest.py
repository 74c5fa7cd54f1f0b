import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def record_criterion():
    """Record (number, title, passed, seconds) for the acceptance summary."""

    def record(number, title, passed, seconds):
        ACCEPTANCE[number] = (title, passed, seconds)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, passed, secs = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'}  {title}  ({secs:.2f} s)")
