"""Real positivity of integer polynomials, decided exactly.

A nonzero ``f`` is non-negative on the real line iff its degree is even, its
leading coefficient is positive and the product of its odd-multiplicity
factors has no real root. Root counting uses Sturm sequences over Z with
positive pseudo-remainder scaling, so no floating point is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from slptools.poly import Polynomial


def _gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Primitive gcd with positive leading coefficient."""
    while not b.is_zero():
        a, b = b, _prem(a, b).primitive()
    return a.primitive()


def _prem(a: Polynomial, b: Polynomial) -> Polynomial:
    """Pseudo-remainder ``|lc(b)|**k * a mod b``; the positive scale preserves signs."""
    r = list(a.coeffs)
    d = b.coeffs
    lc = d[-1]
    scale = abs(lc)
    sign = 1 if lc > 0 else -1
    while len(r) >= len(d) and r:
        shift = len(r) - len(d)
        top = r[-1]
        r = [c * scale for c in r]
        factor = top * sign  # top * scale / lc
        for k, c in enumerate(d):
            r[shift + k] -= factor * c
        while r and r[-1] == 0:
            r.pop()
    return Polynomial(r)


def _exact_quotient(a: Polynomial, b: Polynomial) -> Polynomial:
    q, r = a.divmod(b)
    if not r.is_zero():
        raise ArithmeticError("inexact polynomial division")
    return q


def square_free_decomposition(f: Polynomial) -> list[Polynomial]:
    """Yun's algorithm: ``[a1, a2, ...]`` with ``f ~ a1 * a2**2 * a3**3 * ...`` up to a constant."""
    if f.is_zero():
        raise ValueError("zero polynomial has no square-free decomposition")
    f = f.primitive()
    if f.degree == 0:
        return []
    df = f.derivative()
    g = _gcd(f, df)
    c = _exact_quotient(f, g)
    d = _exact_quotient(df, g) - c.derivative()
    parts = []
    while c.degree > 0:
        a = _gcd(c, d) if not d.is_zero() else c
        parts.append(a.primitive())
        c = _exact_quotient(c, a)
        d = _exact_quotient(d, a) - c.derivative()
    return parts


def square_free_odd_part(f: Polynomial) -> Polynomial:
    """Product of the factors of ``f`` that occur to an odd power (primitive, positive lead)."""
    out = Polynomial.const(1)
    for k, part in enumerate(square_free_decomposition(f), start=1):
        if k % 2:
            out = out * part
    return out.primitive()


def sturm_chain(f: Polynomial) -> list[Polynomial]:
    """Sturm sequence ``f, f', -rem, ...`` up to positive scalar multiples."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    chain = [f, f.derivative()]
    while not chain[-1].is_zero():
        r = _prem(chain[-2], chain[-1])
        if r.is_zero():
            break
        # positive content removal keeps signs intact
        chain.append(-Polynomial(c // r.content() for c in r.coeffs))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_at_infinity(p: Polynomial, positive: bool) -> int:
    s = 1 if p.lead > 0 else -1
    if not positive and p.degree % 2:
        s = -s
    return s


def count_real_roots(f: Polynomial) -> int:
    """Number of distinct real roots, from sign variations of the Sturm chain at -inf and +inf."""
    if f.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    chain = sturm_chain(f)
    neg = _variations([_sign_at_infinity(p, False) for p in chain])
    pos = _variations([_sign_at_infinity(p, True) for p in chain])
    return neg - pos


def is_positive_poly(f: Polynomial) -> bool:
    """``f(x) >= 0`` for every real ``x``."""
    if f.is_zero():
        return True
    if f.degree % 2 or f.lead < 0:
        return False
    odd = square_free_odd_part(f)
    return odd.degree <= 0 or count_real_roots(odd) == 0


def is_poly_square(f: Polynomial) -> Polynomial | None:
    """``g`` with ``g*g == f`` and positive leading coefficient, or ``None``."""
    if f.is_zero():
        return f
    if f.degree % 2 or f.lead < 0:
        return None
    top = math.isqrt(f.lead)
    if top * top != f.lead:
        return None
    n = f.degree // 2
    g = [0] * (n + 1)
    g[n] = top
    for k in range(1, n + 1):
        # coefficient of x**(2n-k): 2*g[n]*g[n-k] plus products of already-known entries
        target = f.coeffs[2 * n - k]
        known = sum(g[i] * g[2 * n - k - i] for i in range(n - k + 1, n))
        num = target - known
        if num % (2 * top):
            return None
        g[n - k] = num // (2 * top)
    cand = Polynomial(g)
    return cand if cand * cand == f else None


@dataclass(frozen=True)
class PositivityBoundInput:
    degree: int
    bitsize: int

    def __post_init__(self):
        if self.degree < 1 or self.bitsize < 1:
            raise ValueError("degree and coefficient bit size must be at least 1")


_ROOT_PRECISION = 64


def _sqrt_floor(n: int) -> Fraction:
    """Rational lower bound on ``sqrt(n)`` within ``2**-64``."""
    return Fraction(math.isqrt(n << (2 * _ROOT_PRECISION)), 1 << _ROOT_PRECISION)


def min_value_lower_bound(inp: PositivityBoundInput) -> Fraction:
    """Rational lower bound on ``3**(d/2) / (2**((2d-1)*tau) * (d+1)**(2d - 1/2))``.

    Strictly positive polynomials of degree ``d`` whose coefficients have at
    most ``tau`` bits stay above this value on the whole real line. Half-integer
    powers are rounded in the direction that keeps the result below the exact
    bound.
    """
    d, tau = inp.degree, inp.bitsize
    numerator = Fraction(3 ** (d // 2)) if d % 2 == 0 else _sqrt_floor(3 ** d)
    # (d+1)**(2d - 1/2) = (d+1)**(2d) / sqrt(d+1); over-estimate it
    denominator = Fraction(2 ** ((2 * d - 1) * tau) * (d + 1) ** (2 * d)) / _sqrt_floor(d + 1)
    return numerator / denominator


def min_value_bound_float(d: int, tau: int) -> float:
    """Floating evaluation of the same bound, for reports; underflows to 0.0."""
    log = d / 2 * math.log(3) - (2 * d - 1) * tau * math.log(2) - (2 * d - 0.5) * math.log(d + 1)
    return math.exp(log)
