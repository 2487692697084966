import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from slptools import numtheory as nt
from tests.conftest import brute_sums


def test_is_3sos_examples():
    assert nt.is_3sos(0) and nt.is_3sos(6)
    assert not nt.is_3sos(7) and not nt.is_3sos(28)
    assert not nt.is_3sos(-1)


def test_is_2sos_examples():
    assert nt.is_2sos(2) and nt.is_2sos(9) and nt.is_2sos(0) and nt.is_2sos(1)
    assert not nt.is_2sos(21) and not nt.is_2sos(3) and not nt.is_2sos(-2)


def test_square_and_isqrt_examples():
    assert nt.is_perfect_square(16) and nt.is_perfect_square(0)
    assert not nt.is_perfect_square(15) and not nt.is_perfect_square(-4)
    assert (nt.isqrt(0), nt.isqrt(24), nt.isqrt(25)) == (0, 4, 5)
    with pytest.raises(ValueError):
        nt.isqrt(-1)


@given(st.integers(0, 2**300))
def test_perfect_square_matches_isqrt(n):
    r = nt.isqrt(n)
    assert r * r <= n < (r + 1) ** 2
    assert nt.is_perfect_square(n) == (r * r == n)
    assert nt.is_perfect_square(n * n)


@given(st.integers(0, 2**200), st.integers(2, 7))
def test_iroot(n, k):
    r = nt.iroot(n, k)
    assert r ** k <= n < (r + 1) ** k


def test_characterizations_against_search():
    limit = 1 << 12
    two, three = brute_sums(limit)
    for n in range(limit):
        assert nt.is_3sos(n) == (n in three)
        assert nt.is_2sos(n) == (n in two)


def test_gadget_values_are_not_sums():
    for m in range(1, 10_001):
        assert not nt.is_3sos(7 * m ** 4)
        assert not nt.is_2sos(3 * m * m)


def test_trailing_zeros():
    assert nt.trailing_zeros(12) == 2
    assert nt.trailing_zeros(7) == 0
    assert nt.trailing_zeros(0) == nt.INFINITE
    assert nt.trailing_zeros(-40) == 3


def test_factorize_examples():
    assert nt.factorize(12).factors == ((2, 2), (3, 1))
    assert nt.factorize(97).factors == ((97, 1),)
    f = nt.factorize(2**64 + 1)
    assert f.factors == ((274177, 1), (67280421310721, 1))
    assert f.value() == 2**64 + 1
    assert nt.factorize(-18).value() == -18
    with pytest.raises(ValueError):
        nt.factorize(0)


def test_factorize_prime_powers_and_large_primes():
    p, q = 1_000_003, 2**61 - 1
    assert nt.factorize(p ** 5 * q ** 2).factors == ((p, 5), (q, 2))
    big = (2**89 - 1) ** 3
    assert nt.factorize(big).factors == ((2**89 - 1, 3),)


def _check_factorization(n, f):
    assert f.value() == n
    primes = [p for p, _ in f.factors]
    assert primes == sorted(set(primes))
    assert all(nt.is_prime(p) for p in primes)
    assert all(e >= 1 for _, e in f.factors)


def test_factorize_random_64bit():
    rng = random.Random(7)
    for _ in range(2000):
        n = rng.randrange(2, 2**64)
        _check_factorization(n, nt.factorize(n))


@pytest.mark.slow
def test_factorize_random_96bit():
    # the rho budget is finite, so a timeout is the one permitted outcome besides a correct answer
    rng = random.Random(96)
    timeouts = 0
    draws = 10_000
    for _ in range(draws):
        n = rng.randrange(2, 2**96)
        try:
            f = nt.factorize(n)
        except nt.FactorizationTimeout:
            timeouts += 1
            continue
        _check_factorization(n, f)
    assert timeouts <= draws // 10


def test_factorize_timeout():
    p, q = 1_000_000_000_039, 1_000_000_000_061  # two 40-bit primes
    with pytest.raises(nt.FactorizationTimeout):
        nt.factorize(p * q, budget=1000)
    assert nt.factorize(p * q).factors == ((p, 1), (q, 1))


def test_is_prime_known_values():
    assert [n for n in range(60) if nt.is_prime(n)] == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
    assert nt.is_prime(2**127 - 1)
    assert not nt.is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7
    assert not nt.is_prime((2**61 - 1) * (2**89 - 1))


def test_is_2sos_large_inputs():
    p = 2**127 - 1  # prime, 3 mod 4
    assert not nt.is_2sos(p)
    assert nt.is_2sos(p * p)
    q = nt.next_prime_1mod4(2**100)
    assert nt.is_2sos(q) and nt.is_2sos(5 * q)
    assert not nt.is_2sos(3 * q * q)


def test_next_prime_1mod4():
    for n in range(0, 200):
        p = nt.next_prime_1mod4(n)
        assert p >= n and p % 4 == 1 and nt.is_prime(p)
        assert not any(nt.is_prime(k) and k % 4 == 1 for k in range(n, p))


def test_four_square_witness():
    assert nt.four_square_witness(7) == (2, 1, 1, 1)
    assert nt.four_square_witness(0) == (0, 0, 0, 0)
    for n in [310, 2**64, 10**18 + 7, 123456789]:
        w = nt.four_square_witness(n)
        assert sum(x * x for x in w) == n
    with pytest.raises(ValueError):
        nt.four_square_witness(2**64 + 1)


def test_density_small():
    count, ratio = nt.density_scan("3sos", 100)
    excluded = [n for n in range(1, 101) if not nt.is_3sos(n)]
    assert excluded == [7, 15, 23, 28, 31, 39, 47, 55, 60, 63, 71, 79, 87, 92, 95]
    assert count == 85 and ratio == 0.85
    two, _ = brute_sums(1001)
    assert nt.density_scan("2sos", 1000)[0] == len([n for n in two if 1 <= n <= 1000])


def test_density_3sos_count_formula():
    limit = 10**6
    # numbers 4**a (8k + 7) up to limit
    excluded = sum((limit // 4 ** a + 1) // 8 for a in range(11))
    count, ratio = nt.density_scan("3sos", limit)
    assert count == limit - excluded == 833_336
    assert abs(ratio - 5 / 6) < 0.002


def test_density_2sos_value():
    count, ratio = nt.density_scan("2sos", 10**6)
    assert count == 216_341
    assert ratio == pytest.approx(216_341 * math.sqrt(math.log(10**6)) / 10**6)


def test_density_errors():
    with pytest.raises(ValueError):
        nt.density_scan("4sos", 100)
    with pytest.raises(ValueError):
        nt.density_scan("3sos", 10**8 + 1)
