import pytest

# filled by tests/test_acceptance.py: (criterion id, passed, detail)
ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    def record(cid: str, passed: bool, detail: str = ""):
        ACCEPTANCE_LINES.append((cid, passed, detail))
        print(f"[{'PASS' if passed else 'FAIL'}] {cid} {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for cid, passed, detail in sorted(ACCEPTANCE_LINES, key=lambda x: int(x[0].split()[1])):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {cid}: {detail}")


@pytest.fixture
def data_dir():
    from pathlib import Path

    return Path(__file__).parent / "data"
