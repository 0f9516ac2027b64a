"""Shared pytest wiring: the acceptance gate prints one line per criterion
in the terminal summary, after the usual test report."""

_GATE_LINES = {}


def record_gate_line(number, line):
    _GATE_LINES[number] = line


def pytest_terminal_summary(terminalreporter):
    if not _GATE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_GATE_LINES):
        terminalreporter.write_line(_GATE_LINES[number])
