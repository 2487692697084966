"""Integer kernel: sums of squares, square tests, factorization, 2-adic valuation."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

INFINITE = math.inf

TRIAL_DIVISION_LIMIT = 10**6
DEFAULT_RHO_BUDGET = 10**6
MR_BASES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
MR_RANDOM_ROUNDS = 40


class FactorizationTimeout(RuntimeError):
    pass


@dataclass(frozen=True)
class Factorization:
    factors: tuple[tuple[int, int], ...]
    sign: int = 1

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p ** e
        return out


def isqrt(n: int) -> int:
    return math.isqrt(n)


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    # quadratic residues mod 64 weed out most non-squares cheaply
    if (n & 63) not in _SQUARES_MOD_64:
        return False
    r = math.isqrt(n)
    return r * r == n


_SQUARES_MOD_64 = frozenset(k * k % 64 for k in range(64))


def iroot(n: int, k: int) -> int:
    """Largest ``r`` with ``r**k <= n`` for ``n >= 0``."""
    if n < 2:
        return n
    r = 1 << -(-n.bit_length() // k)
    while True:
        s = ((k - 1) * r + n // r ** (k - 1)) // k
        if s >= r:
            break
        r = s
    while r ** k > n:
        r -= 1
    return r


def trailing_zeros(n: int):
    """Exponent of the largest power of two dividing ``|n|``; ``INFINITE`` for 0."""
    if n == 0:
        return INFINITE
    return (n & -n).bit_length() - 1


def is_3sos(n: int) -> bool:
    """Sum of three squares iff not of the form ``4**a * (8k + 7)``."""
    if n < 0:
        return False
    if n == 0:
        return True
    v = (n & -n).bit_length() - 1
    return v % 2 == 1 or (n >> v) % 8 != 7


# --- primality and factorization -------------------------------------------

@lru_cache(maxsize=None)
def _primes_below(limit: int) -> tuple[int, ...]:
    sieve = np.ones(limit, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


class _ProductTree:
    """Binary tree of prime products, for extracting small prime factors with gcds."""

    def __init__(self, primes):
        self.levels = [list(primes)]
        while len(self.levels[-1]) > 1:
            prev = self.levels[-1]
            self.levels.append([math.prod(prev[k:k + 2]) for k in range(0, len(prev), 2)])

    def divisors_of(self, n: int) -> list[int]:
        top = len(self.levels) - 1
        g = math.gcd(n, self.levels[top][0])
        if g == 1:
            return []
        frontier = [(0, g)]
        for level in range(top - 1, -1, -1):
            nodes = self.levels[level]
            nxt = []
            for idx, gg in frontier:
                for child in (2 * idx, 2 * idx + 1):
                    if child < len(nodes):
                        h = math.gcd(gg, nodes[child])
                        if h > 1:
                            nxt.append((child, h))
            frontier = nxt
        return [self.levels[0][idx] for idx, _ in frontier]


@lru_cache(maxsize=None)
def _small_tree() -> _ProductTree:
    return _ProductTree(_primes_below(TRIAL_DIVISION_LIMIT))


SPF_LIMIT = 1 << 20


@lru_cache(maxsize=None)
def _smallest_factor_table() -> np.ndarray:
    spf = np.zeros(SPF_LIMIT, dtype=np.int32)
    for p in _primes_below(math.isqrt(SPF_LIMIT) + 1):
        block = spf[p * p::p]
        block[block == 0] = p
    unset = spf == 0
    spf[unset] = np.flatnonzero(unset)
    return spf


def small_prime_factors(n: int) -> tuple[list[tuple[int, int]], int]:
    """Split off all prime factors below the trial-division limit.

    Returns ``([(p, e), ...], cofactor)`` for ``n >= 1``.
    """
    found = []
    if n < SPF_LIMIT:
        spf = _smallest_factor_table()
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found.append((p, e))
        return found, 1
    for p in _small_tree().divisors_of(n):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        found.append((p, e))
    return found, n


def is_prime(n: int) -> bool:
    """Miller-Rabin: deterministic below 2**64, 40 random bases above."""
    if n < 2:
        return False
    for p in MR_BASES_64:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < 1 << 64:
        bases = MR_BASES_64
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(MR_RANDOM_ROUNDS)]
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int, rng: random.Random, budget: int) -> int:
    """Nontrivial factor of the odd composite ``n`` (Pollard rho, Brent's cycle)."""
    spent = 0
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
            if spent > budget:
                raise FactorizationTimeout(f"rho budget of {budget} iterations exhausted on {n}")
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def _perfect_power(n: int) -> tuple[int, int]:
    """``(r, k)`` with ``r**k == n`` and ``k`` maximal among primes tried, else ``(n, 1)``."""
    # callers guarantee no prime factor below the trial-division limit, so roots are >= 2**19
    for k in _primes_below(max(3, n.bit_length() // 19 + 2)):
        r = iroot(n, k)
        if r ** k == n:
            rr, kk = _perfect_power(r)
            return rr, k * kk
    return n, 1


def _factor_large(n: int, out: dict, rng: random.Random, budget: int) -> None:
    """Factor ``n`` that has no prime factor below the trial-division limit."""
    if n == 1:
        return
    if n < TRIAL_DIVISION_LIMIT ** 2 or is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r, k = _perfect_power(n)
    if k > 1:
        sub: dict = {}
        _factor_large(r, sub, rng, budget)
        for p, e in sub.items():
            out[p] = out.get(p, 0) + e * k
        return
    d = _brent(n, rng, budget)
    _factor_large(d, out, rng, budget)
    _factor_large(n // d, out, rng, budget)


def factorize(n: int, budget: int = DEFAULT_RHO_BUDGET) -> Factorization:
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = -1 if n < 0 else 1
    small, cofactor = small_prime_factors(abs(n))
    large: dict[int, int] = {}
    _factor_large(cofactor, large, random.Random(cofactor), budget)
    factors = dict(small)
    for p, e in large.items():
        factors[p] = factors.get(p, 0) + e
    return Factorization(tuple(sorted(factors.items())), sign)


# --- sums of two squares ----------------------------------------------------

def _odd_is_2sos(n: int, budget: int) -> bool:
    if n == 1:
        return True
    # every prime 3 mod 4 at an even power forces n = 1 mod 4
    if n % 4 == 3:
        return False
    if is_perfect_square(n):
        return True
    small, c = small_prime_factors(n)
    for p, e in small:
        if p % 4 == 3 and e % 2:
            return False
    if c == 1:
        return True
    if c % 4 == 3:
        return False
    if is_perfect_square(c) or c < TRIAL_DIVISION_LIMIT ** 2 or is_prime(c):
        return True
    r, k = _perfect_power(c)
    if k > 1:
        return k % 2 == 0 or _odd_is_2sos(r, budget)
    large: dict[int, int] = {}
    _factor_large(c, large, random.Random(c), budget)
    return all(p % 4 == 1 or e % 2 == 0 for p, e in large.items())


def is_2sos(n: int, budget: int = DEFAULT_RHO_BUDGET) -> bool:
    """Sum of two squares iff every prime ``3 mod 4`` divides ``n`` to an even power."""
    if n < 0:
        return False
    if n < 2:
        return True
    return _odd_is_2sos(n >> ((n & -n).bit_length() - 1), budget)


def next_prime_1mod4(n: int) -> int:
    """Smallest prime ``p >= n`` with ``p = 1 mod 4``."""
    p = max(n, 5)
    p += (1 - p) % 4
    while not is_prime(p):
        p += 4
    return p


def four_square_witness(n: int) -> tuple[int, int, int, int]:
    """Lagrange decomposition ``a*a + b*b + c*c + d*d == n`` by descending search."""
    if n < 0:
        raise ValueError("negative integers are not sums of squares")
    if n > 1 << 64:
        raise ValueError("four-square search is limited to n <= 2**64")
    a = isqrt(n)
    while not is_3sos(n - a * a):
        a -= 1
    r = n - a * a
    b = isqrt(r)
    while not is_2sos(r - b * b):
        b -= 1
    q = r - b * b
    c = isqrt(q)
    while not is_perfect_square(q - c * c):
        c -= 1
    return a, b, c, isqrt(q - c * c)


# --- density scans -----------------------------------------------------------

DENSITY_LIMIT = 10**8


def _three_sos_mask(limit: int) -> np.ndarray:
    n = np.arange(1, limit + 1, dtype=np.int64)
    low = n & -n
    even_valuation = (low & 0x5555555555555555) != 0
    return ~(even_valuation & ((n // low) % 8 == 7))


def _two_sos_mask(limit: int) -> np.ndarray:
    """Mask over ``0..limit``: True where every prime ``3 mod 4`` has even exponent."""
    bad = np.zeros(limit + 1, dtype=bool)
    root = math.isqrt(limit)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, root + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    primes = np.flatnonzero(sieve)
    for p in primes[primes % 4 == 3]:
        p = int(p)
        if p > root:
            bad[p::p] = True
            continue
        multiples = np.arange(p, limit + 1, p, dtype=np.int64)
        parity = np.zeros(len(multiples), dtype=bool)
        pk = p
        while pk <= limit:
            parity ^= multiples % pk == 0
            pk *= p
        bad[multiples] |= parity
    return ~bad


def density_scan(kind: str, limit: int) -> tuple[int, float]:
    """Count 3SoS or 2SoS integers in ``[1, limit]``.

    The ratio is ``count / limit`` for 3SoS and ``count * sqrt(ln limit) / limit``
    for 2SoS (the latter tends to the Landau-Ramanujan constant).
    """
    if limit < 2:
        raise ValueError("limit must be at least 2")
    if limit > DENSITY_LIMIT:
        raise ValueError(f"limit above {DENSITY_LIMIT}")
    if kind == "3sos":
        count = int(_three_sos_mask(limit).sum())
        return count, count / limit
    if kind == "2sos":
        count = int(_two_sos_mask(limit)[1:].sum())
        return count, count * math.sqrt(math.log(limit)) / limit
    raise ValueError(f"unknown density kind {kind!r}")
