import random

import numpy as np
import pytest

from cubic4 import datasets
from cubic4.qpoly import S_VARS, MPolyF2, monomials


def slow_mul(a: int, b: int, modulus: int, m: int) -> int:
    """Shift-and-add multiplication in F_2[x]/(modulus); oracle for the library."""
    r = 0
    for _ in range(m):
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a >> m & 1:
            a ^= modulus
    return r


def mul_table(modulus: int, m: int) -> np.ndarray:
    q = 1 << m
    return np.array([[slow_mul(a, b, modulus, m) for b in range(q)] for a in range(q)], dtype=np.int64)


def random_cubic_F2(rng: random.Random, density: float = 0.5) -> MPolyF2:
    mons = monomials(6, 3)
    return MPolyF2([e for e in mons if rng.random() < density], S_VARS)


@pytest.fixture(scope="session")
def shipped():
    return datasets.load_all()


@pytest.fixture(scope="session")
def reductions(shipped):
    return {k: d.reduction() for k, d in shipped.items()}


ACCEPTANCE_LINES: list[str] = []


def report_criterion(number: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {number} {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
