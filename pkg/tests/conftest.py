import pytest

from favard_lab.curves import extend_curve, make_circle_arc, make_parabola

# (criterion, passed, detail) lines collected by the acceptance suite
ACCEPTANCE_LINES: list[tuple[int, bool, str]] = []


@pytest.fixture(scope="session")
def parabola():
    return extend_curve(make_parabola(0.5, (-0.9, 0.9)))


@pytest.fixture(scope="session")
def arc():
    return extend_curve(make_circle_arc(2.0, (-1.0, 1.0)))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
