"""Collects one verdict line per acceptance criterion and prints them after the run."""

import pytest

VERDICTS = {}


@pytest.fixture
def verdict(request):
    """Call ``verdict(label, ok, detail)`` to record and assert a criterion."""

    def record(label: str, ok: bool, detail: str = ""):
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
        VERDICTS[label] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(VERDICTS, key=lambda s: (len(s.split()[1]), s)):
        terminalreporter.write_line(VERDICTS[label])
