import pytest

_LINES = pytest.StashKey[list]()


@pytest.fixture
def report(request, capsys):
    """Print one PASS/FAIL line for an acceptance criterion and assert it."""

    def emit(criterion, label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {label}" + (f" [{detail}]" if detail else "")
        request.config.stash.setdefault(_LINES, []).append(line)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
