import math

import pytest

from haselgrip.actuator import PouchGeometry
from haselgrip.hinge import HingeUnit

ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    """Note one check towards an acceptance criterion; a criterion passes if all its checks do."""
    ACCEPTANCE.setdefault(number, []).append((passed, detail))


def acceptance_lines() -> list[str]:
    lines = []
    for number in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[number]
        ok = all(passed for passed, _ in checks)
        shown = [d for passed, d in checks if not passed] if not ok else [d for _, d in checks]
        details = "; ".join(dict.fromkeys(shown))
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {details}")
    return lines


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance_lines():
        terminalreporter.write_line(line)


@pytest.fixture
def baseline_hinge():
    """40 x 10 x 10 mm pouch at 46 deg maximum deflection."""
    return HingeUnit(PouchGeometry(10e-3, 10e-3, 40e-3), math.radians(46.0), label="pwt10")
