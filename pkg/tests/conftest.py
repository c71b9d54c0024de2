import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE: dict[int, str] = {}


def record(number: int, passed: bool, detail: str) -> str:
    line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    _ACCEPTANCE[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])
