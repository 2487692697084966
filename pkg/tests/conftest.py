import math
import sys
from functools import lru_cache

import pytest
from hypothesis import settings

from slptools.slp import SlpBuilder

settings.register_profile("default", deadline=None, max_examples=200)
settings.load_profile("default")


@lru_cache(maxsize=None)
def brute_sums(limit: int):
    """Sets of sums of two and of three squares below ``limit``, by plain search."""
    root = math.isqrt(limit) + 1
    two = set()
    for a in range(root):
        for b in range(a, root):
            if a * a + b * b < limit:
                two.add(a * a + b * b)
    three = set()
    for t in two:
        for c in range(root):
            if t + c * c >= limit:
                break
            three.add(t + c * c)
    return two, three


def poly_slp(coeffs):
    """Univariate program for sum(c_k x**k), by Horner."""
    b = SlpBuilder(1)
    x = b.var(1)
    acc = b.const(coeffs[-1]) if coeffs else b.zero()
    for c in reversed(coeffs[:-1]):
        acc = b.mul(acc, x)
        acc = b.add(acc, b.const(c)) if c else acc
    return b.build(acc)


@pytest.fixture
def poly_program():
    return poly_slp


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("tests.test_acceptance") or sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(acceptance.RESULTS):
            terminalreporter.write_line(acceptance.RESULTS[number])
