import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    def record(name, ok, detail=''):
        line = '[%s] %s%s' % ('PASS' if ok else 'FAIL', name,
                              ' -- ' + detail if detail else '')
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section('acceptance criteria')
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
