import pytest

ACCEPTANCE = []


@pytest.fixture
def record():
    """Collect one summary line per acceptance criterion."""
    def add(number, ok, detail):
        line = f'criterion {number}: {"PASS" if ok else "FAIL"} - {detail}'
        ACCEPTANCE.append(line)
        print(line)
        return ok
    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section('acceptance criteria')
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
