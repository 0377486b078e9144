from fractions import Fraction

import pytest

from fourstate.data import preset_data
from fourstate.verify import solve_coefficients

ACCEPTANCE_LINES: dict[int, str] = {}


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
    missing = [n for n in range(1, 9) if n not in ACCEPTANCE_LINES]
    for n in missing:
        terminalreporter.write_line(f"ACCEPTANCE {n}: FAIL - did not complete")


@pytest.fixture(scope="session")
def preset():
    return preset_data()


@pytest.fixture(scope="session")
def F(preset):
    return solve_coefficients(preset)


def fr(text: str) -> Fraction:
    return Fraction(text)
