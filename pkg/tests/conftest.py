import pytest

# One line per acceptance criterion, echoed after the run so the verdicts
# survive pytest's output capture.
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def criterion():
    def record(num, name, ok, detail=""):
        verdict = "PASS" if ok else "FAIL"
        line = f"criterion {num} ({name}): {verdict}"
        if detail:
            line += f" - {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
