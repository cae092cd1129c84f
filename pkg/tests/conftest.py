import cmath
import math

import numpy as np
import pytest

from lommelbound import OrderPair


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def rect(r, theta):
    return cmath.rect(r, theta)


TABLE1 = OrderPair(-2, 1.5)
TABLE2 = OrderPair(-6, 4.5)
TABLE3 = OrderPair(2 + 2j, 0.5 - 1j)
QUARTER = math.pi / 4


_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """record(k, ok, detail) stores the verdict of acceptance criterion k."""

    def record(k, ok, detail):
        _ACCEPTANCE[k] = (bool(ok), detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {k:>2}: {detail}")
