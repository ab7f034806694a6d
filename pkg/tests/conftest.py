import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    def record(criterion, result, ok=None):
        ok = result.passed if ok is None else ok
        line = f"criterion {criterion:>2}: {'PASS' if ok else 'FAIL'}  {result.name}: {result.detail} [{result.seconds:.2f}s]"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
