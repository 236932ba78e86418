import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qkmetric.prepotential import CubicForm, Quadratic, VerySpecial

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ORACLE_PATH = Path(__file__).parent / "data" / "oracle.json"


@pytest.fixture(scope="session")
def oracle():
    """Values frozen from the symbolic oracle in tests/oracle/derive.py."""
    return json.loads(ORACLE_PATH.read_text())


def cubic_x3() -> VerySpecial:
    return VerySpecial(CubicForm.from_monomials(1, {(1, 1, 1): 1.0}))


def cubic_stu() -> VerySpecial:
    # h = x1 x2 x3, hyperbolic on the positive octant
    return VerySpecial(CubicForm.from_monomials(3, {(1, 2, 3): 1.0}))


def cubic_n2() -> VerySpecial:
    # h = x1^2 x2 (n = 2), hyperbolic where x2 > 0
    return VerySpecial(CubicForm.from_monomials(2, {(1, 1, 2): 1.0}))


@pytest.fixture
def x3():
    return cubic_x3()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ALL_MODELS = {
    "quadratic-0": Quadratic(0),
    "quadratic-1": Quadratic(1),
    "quadratic-2": Quadratic(2),
    "x3": cubic_x3(),
    "x1^2 x2": cubic_n2(),
}


# one line per acceptance criterion, printed after the run
CRITERION_LINES: list[str] = []


def record_criterion(label: str, ok: bool, detail: str) -> None:
    CRITERION_LINES.append(f"{label}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
