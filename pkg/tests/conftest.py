import pytest

_ACCEPTANCE: list[str] = []


@pytest.fixture
def record():
    """Record one acceptance line: record(number, ok, detail)."""

    def _record(number, ok, detail="", tag=None):
        tag = tag or ("PASS" if ok else "FAIL")
        _ACCEPTANCE.append(f"{tag:4}  criterion {number}: {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
