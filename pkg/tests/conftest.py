import pytest

from pww import kernels
from pww.trace import parse_trace

REMOTE_SHELL_TRACE = """\
accept fd=5 => 6
dup fd=6 => 2
dup fd=6 => 1
dup fd=6 => 0
execve exe=sh
"""

# (criterion, passed, detail) rows filled in by test_acceptance
ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def shell_records():
    return parse_trace(REMOTE_SHELL_TRACE.splitlines())


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    return kernels.backends()[request.param]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
