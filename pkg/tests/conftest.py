import pytest

from semiclique.instance import InstanceParams, Random, generate

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def tiny8():
    return generate(InstanceParams(8, 4, 42, Random()))


@pytest.fixture(scope="session")
def verdict():
    """Record one PASS/FAIL line per acceptance criterion for the terminal summary."""
    def record(number: int, ok: bool, detail: str):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
