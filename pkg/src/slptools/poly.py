"""Exact integer polynomials: dense univariate and sparse multivariate."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

NEG_INF = -math.inf
POS_INF = math.inf


def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class Polynomial:
    """Univariate polynomial; ``coeffs[k]`` is the coefficient of ``x**k``.

    The zero polynomial has an empty coefficient tuple, degree ``-inf`` and
    order ``+inf``. Coefficients are normally ``int``; the real-root code also
    uses ``Fraction`` coefficients internally.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        self.coeffs = tuple(_trim(list(coeffs)))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Polynomial":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "Polynomial":
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-r, 1))
        return p

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def order(self):
        """Largest ``k`` with ``x**k`` dividing the polynomial."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return POS_INF

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else 0

    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def bitsize(self) -> int:
        """Bit size of the largest coefficient, at least 1."""
        return max(1, int(self.height()).bit_length())

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] += c
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial()
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        result = Polynomial.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def shift_exponent(self, k: int) -> "Polynomial":
        """Multiply by ``x**k``."""
        return Polynomial((0,) * k + self.coeffs) if self.coeffs else self

    def reversal(self, m: int) -> "Polynomial":
        """``x**m * f(1/x)`` for ``m >= deg f``."""
        if not self.coeffs:
            return self
        if m < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        padded = list(self.coeffs) + [0] * (m + 1 - len(self.coeffs))
        return Polynomial(reversed(padded))

    def content(self) -> int:
        return math.gcd(*self.coeffs) if self.coeffs else 0

    def primitive(self) -> "Polynomial":
        """Integer primitive part with positive leading coefficient.

        Accepts rational coefficients; the result is the unique primitive
        integer polynomial that is a positive rational multiple of ``self``.
        """
        if not self.coeffs:
            return self
        dens = [Fraction(c).denominator for c in self.coeffs]
        scale = math.lcm(*dens)
        ints = [int(Fraction(c) * scale) for c in self.coeffs]
        g = math.gcd(*ints)
        if ints[-1] < 0:
            g = -g
        return Polynomial(c // g for c in ints)

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        """Euclidean division over the rationals."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        d = other.coeffs
        lc = Fraction(d[-1])
        q = [Fraction(0)] * max(0, len(rem) - len(d) + 1)
        while len(rem) >= len(d) and rem:
            shift = len(rem) - len(d)
            factor = rem[-1] / lc
            q[shift] = factor
            for k, c in enumerate(d):
                rem[shift + k] -= factor * c
            _trim(rem)
        return Polynomial(q), Polynomial(rem)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(f"{c}")
            elif k == 1:
                terms.append(f"{c} x")
            else:
                terms.append(f"{c} x^{k}")
        return " + ".join(terms)


Monomial = tuple[int, ...]


class MultiPolynomial:
    """Sparse polynomial in ``nvars`` variables: exponent vector -> coefficient."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, int] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, nvars: int, c: int) -> "MultiPolynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, k: int) -> "MultiPolynomial":
        """The variable ``x_k`` (1-based)."""
        e = [0] * nvars
        e[k - 1] = 1
        return cls(nvars, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self):
        """Total degree; ``-inf`` for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=NEG_INF)

    def homogeneous_part(self, i: int) -> "MultiPolynomial":
        return MultiPolynomial(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == i})

    def height(self) -> int:
        return max((abs(c) for c in self.terms.values()), default=0)

    def __call__(self, *point):
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                term *= x ** k
            total += term
        return total

    def __eq__(self, other):
        if isinstance(other, MultiPolynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __add__(self, other: "MultiPolynomial") -> "MultiPolynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPolynomial(self.nvars, out)

    def __neg__(self):
        return MultiPolynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MultiPolynomial") -> "MultiPolynomial":
        return self + (-other)

    def __mul__(self, other: "MultiPolynomial") -> "MultiPolynomial":
        out: dict[Monomial, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPolynomial(self.nvars, out)

    def __repr__(self):
        return f"MultiPolynomial({self.nvars}, {self.terms!r})"
