import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from slptools.poly import Polynomial
from slptools.polyreal import (
    PositivityBoundInput,
    count_real_roots,
    is_poly_square,
    is_positive_poly,
    min_value_bound_float,
    min_value_lower_bound,
    square_free_decomposition,
    square_free_odd_part,
    sturm_chain,
)

X = Polynomial.x()
ONE = Polynomial.const(1)
small_coeffs = st.lists(st.integers(-100, 100), min_size=1, max_size=9)


def test_odd_part_examples():
    assert square_free_odd_part(X * X * (X - 1)) == X - 1
    assert square_free_odd_part((X * X + 1) ** 2) == ONE
    assert square_free_odd_part(X ** 3) == X
    assert square_free_odd_part(-3 * (X - 2) ** 3 * (X + 5) ** 2) == X - 2
    with pytest.raises(ValueError):
        square_free_odd_part(Polynomial())


def test_square_free_decomposition_reassembles():
    f = (X - 1) * (X + 2) ** 2 * (X * X + 3) ** 3
    parts = square_free_decomposition(f)
    rebuilt = ONE
    for k, p in enumerate(parts, start=1):
        rebuilt = rebuilt * p ** k
    assert rebuilt == f


def test_count_real_roots_examples():
    assert count_real_roots(X * X + 1) == 0
    assert count_real_roots(X * X - 2) == 2
    assert count_real_roots(X ** 3 - X) == 3
    assert count_real_roots(Polynomial.const(5)) == 0
    assert count_real_roots((X - 1) ** 4 * (X + 1)) == 2
    with pytest.raises(ValueError):
        count_real_roots(Polynomial())


def test_sturm_chain_degrees_decrease():
    chain = sturm_chain(X ** 5 - 3 * X ** 2 + 1)
    assert chain[0] == X ** 5 - 3 * X ** 2 + 1
    degrees = [p.degree for p in chain]
    assert degrees == sorted(degrees, reverse=True) and len(set(degrees)) == len(degrees)


def _sympy_roots(coeffs):
    x = sympy.Symbol("x")
    p = sympy.Poly(list(reversed(coeffs)), x)
    return len(set(sympy.real_roots(p)))


def test_root_count_against_sympy():
    rng = random.Random(11)
    for _ in range(1000):
        deg = rng.randint(1, 6)
        coeffs = [rng.randint(-20, 20) for _ in range(deg)] + [rng.choice([-1, 1]) * rng.randint(1, 20)]
        if rng.random() < 0.3:
            # force repeated roots now and then
            r = rng.randint(-3, 3)
            coeffs = ((X - r) ** 2 * Polynomial(coeffs[:4])).coeffs
            if not coeffs:
                continue
        f = Polynomial(coeffs)
        if f.is_zero():
            continue
        assert count_real_roots(f) == _sympy_roots(list(f.coeffs))


def test_is_positive_examples():
    assert is_positive_poly(X * X)
    assert not is_positive_poly(X)
    assert is_positive_poly((X * X - 2) ** 2)
    assert not is_positive_poly(X * X - 1)
    assert is_positive_poly(Polynomial())
    assert is_positive_poly(Polynomial.const(3))
    assert not is_positive_poly(Polynomial.const(-3))
    assert not is_positive_poly(-(X * X) - 1)
    assert is_positive_poly(X ** 4 - 2 * X ** 2 + 1)


def test_is_poly_square_examples():
    assert is_poly_square(X * X + 2 * X + 1) == X + 1
    assert is_poly_square(X * X + 1) is None
    assert is_poly_square(4 * X ** 4) == 2 * X * X
    assert is_poly_square(Polynomial.const(9)) == Polynomial.const(3)
    assert is_poly_square(Polynomial.const(-9)) is None
    assert is_poly_square(X ** 3) is None
    assert is_poly_square(X * X + 3 * X + 1) is None


@given(small_coeffs)
def test_squares_are_positive_and_recovered(coeffs):
    g = Polynomial(coeffs)
    f = g * g
    assert is_positive_poly(f)
    root = is_poly_square(f)
    assert root is not None and (root == g or root == -g)


@given(st.integers(-50, 50), small_coeffs)
def test_simple_real_root_is_not_positive(r, coeffs):
    h = Polynomial(coeffs) ** 2 + 1  # even degree, positive, no real root
    assert not is_positive_poly((X - r) * h)


@given(small_coeffs, small_coeffs)
def test_square_plus_one_positive(a, b):
    f = Polynomial(a) ** 2 + Polynomial(b) ** 2 + 1
    assert is_positive_poly(f)
    assert is_positive_poly(f - 1)


def _bound_oracle(d, tau):
    mpmath.mp.dps = 80
    return mpmath.mpf(3) ** (mpmath.mpf(d) / 2) / (
        mpmath.mpf(2) ** ((2 * d - 1) * tau) * mpmath.mpf(d + 1) ** (2 * d - mpmath.mpf(1) / 2))


def test_bound_examples():
    b = min_value_lower_bound(PositivityBoundInput(2, 1))
    assert isinstance(b, Fraction)
    exact = _bound_oracle(2, 1)
    assert mpmath.mpf(b.numerator) / b.denominator <= exact
    assert b > Fraction(7, 1000)
    assert abs(float(exact) - 3 / (8 * 3 ** 3.5)) < 1e-15
    one = min_value_lower_bound(PositivityBoundInput(1, 1))
    assert 0 < mpmath.mpf(one.numerator) / one.denominator <= _bound_oracle(1, 1)
    assert min_value_lower_bound(PositivityBoundInput(2, 2)) < b


@pytest.mark.parametrize("d,tau", [(1, 1), (2, 1), (3, 4), (6, 10), (11, 3), (40, 40)])
def test_bound_is_tight_under_approximation(d, tau):
    b = min_value_lower_bound(PositivityBoundInput(d, tau))
    exact = _bound_oracle(d, tau)
    got = mpmath.mpf(b.numerator) / b.denominator
    assert 0 < got <= exact
    assert (exact - got) / exact < mpmath.mpf(2) ** -50
    assert min_value_bound_float(d, tau) == pytest.approx(float(exact), rel=1e-9, abs=1e-300)


def test_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        PositivityBoundInput(0, 1)
    with pytest.raises(ValueError):
        PositivityBoundInput(2, 0)


def test_sampled_minimum_dominates_bound():
    rng = random.Random(5)
    for _ in range(30):
        g = Polynomial([rng.randint(-9, 9) for _ in range(rng.randint(1, 4))])
        f = g * g + 1
        bound = min_value_lower_bound(PositivityBoundInput(max(f.degree, 1), f.bitsize()))
        sampled = min(f(Fraction(k, 1000)) for k in range(-5000, 5000))
        assert sampled >= bound
