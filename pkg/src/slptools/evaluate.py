"""Exact, modular and symbolic evaluation of straight-line programs."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from slptools.poly import MultiPolynomial, Polynomial
from slptools.slp import Slp


class BudgetExceeded(RuntimeError):
    """An intermediate result outgrew the evaluation budget at ``gate``."""

    def __init__(self, gate: int, what: str):
        super().__init__(f"budget exceeded at gate {gate}: {what}")
        self.gate = gate


class PrecisionViolation(ValueError):
    pass


@dataclass(frozen=True)
class EvalBudget:
    max_bits: int = 1 << 20
    max_degree: int = 1 << 16
    max_terms: int = 100_000

    def __post_init__(self):
        if min(self.max_bits, self.max_degree, self.max_terms) <= 0:
            raise ValueError("budget caps must be positive")


DEFAULT_BUDGET = EvalBudget()


def _check_assignment(slp: Slp, assignment: Sequence[int]) -> None:
    if len(assignment) != slp.num_vars:
        raise ValueError(f"program has {slp.num_vars} variables, got {len(assignment)} values")


def eval_exact(slp: Slp, assignment: Sequence[int] = (), budget: EvalBudget | None = None) -> int:
    _check_assignment(slp, assignment)
    max_bits = (budget or DEFAULT_BUDGET).max_bits
    vals = [1] * (slp.size + 1)
    for p, (op, i, j) in enumerate(slp.instrs, start=1):
        if op == "var":
            v = assignment[i - 1]
        elif op == "add":
            v = vals[i] + vals[j]
        elif op == "sub":
            v = vals[i] - vals[j]
        else:
            a, b = vals[i], vals[j]
            # a product has at least len(a) + len(b) - 1 bits; refuse before multiplying
            if a and b and a.bit_length() + b.bit_length() - 1 > max_bits:
                raise BudgetExceeded(p, f"product exceeds {max_bits} bits")
            v = a * b
        if v.bit_length() > max_bits:
            raise BudgetExceeded(p, f"value exceeds {max_bits} bits")
        vals[p] = v
    return vals[slp.output]


def eval_mod(slp: Slp, assignment: Sequence[int] = (), modulus: int = 2) -> int:
    if modulus < 2:
        raise ValueError("modulus must be at least 2")
    _check_assignment(slp, assignment)
    if modulus & (modulus - 1) == 0:
        return _eval_mask(slp, assignment, modulus - 1)
    vals = [1 % modulus] * (slp.size + 1)
    for p, (op, i, j) in enumerate(slp.instrs, start=1):
        if op == "var":
            vals[p] = assignment[i - 1] % modulus
        elif op == "add":
            vals[p] = (vals[i] + vals[j]) % modulus
        elif op == "sub":
            vals[p] = (vals[i] - vals[j]) % modulus
        else:
            vals[p] = vals[i] * vals[j] % modulus
    return vals[slp.output]


def _eval_mask(slp: Slp, assignment: Sequence[int], mask: int) -> int:
    # power-of-two modulus: reduce with a bit mask instead of a division
    vals = [1 & mask] * (slp.size + 1)
    for p, (op, i, j) in enumerate(slp.instrs, start=1):
        if op == "var":
            vals[p] = assignment[i - 1] & mask
        elif op == "add":
            vals[p] = (vals[i] + vals[j]) & mask
        elif op == "sub":
            vals[p] = (vals[i] - vals[j]) & mask
        else:
            vals[p] = (vals[i] * vals[j]) & mask
    return vals[slp.output]


def _check_poly(p: Polynomial, gate: int, budget: EvalBudget) -> Polynomial:
    if p.coeffs:
        if p.degree > budget.max_degree:
            raise BudgetExceeded(gate, f"degree exceeds {budget.max_degree}")
        if p.height().bit_length() > budget.max_bits:
            raise BudgetExceeded(gate, f"coefficient exceeds {budget.max_bits} bits")
    return p


def expand_univariate(slp: Slp, budget: EvalBudget | None = None) -> Polynomial:
    if slp.num_vars > 1:
        raise ValueError("univariate expansion of a multivariate program")
    budget = budget or DEFAULT_BUDGET
    one = Polynomial.const(1)
    vals = [one] * (slp.size + 1)
    for p, (op, i, j) in enumerate(slp.instrs, start=1):
        if op == "var":
            v = Polynomial.x()
        elif op == "add":
            v = vals[i] + vals[j]
        elif op == "sub":
            v = vals[i] - vals[j]
        else:
            a, b = vals[i], vals[j]
            if a.coeffs and b.coeffs and a.degree + b.degree > budget.max_degree:
                raise BudgetExceeded(p, f"degree exceeds {budget.max_degree}")
            v = a * b
        vals[p] = _check_poly(v, p, budget)
    return vals[slp.output]


def expand_multivariate(slp: Slp, budget: EvalBudget | None = None) -> MultiPolynomial:
    budget = budget or DEFAULT_BUDGET
    n = slp.num_vars
    one = MultiPolynomial.const(n, 1)
    vals = [one] * (slp.size + 1)
    for p, (op, i, j) in enumerate(slp.instrs, start=1):
        if op == "var":
            v = MultiPolynomial.var(n, i)
        elif op == "add":
            v = vals[i] + vals[j]
        elif op == "sub":
            v = vals[i] - vals[j]
        else:
            if len(vals[i].terms) * len(vals[j].terms) > budget.max_terms * 8:
                raise BudgetExceeded(p, "term count")
            v = vals[i] * vals[j]
        if len(v.terms) > budget.max_terms:
            raise BudgetExceeded(p, f"more than {budget.max_terms} terms")
        if v.terms and v.degree > budget.max_degree:
            raise BudgetExceeded(p, f"degree exceeds {budget.max_degree}")
        if v.height().bit_length() > budget.max_bits:
            raise BudgetExceeded(p, f"coefficient exceeds {budget.max_bits} bits")
        vals[p] = v
    return vals[slp.output]


def expand_poly(slp: Slp, budget: EvalBudget | None = None) -> Polynomial | MultiPolynomial:
    """Coefficient expansion: a :class:`Polynomial` for at most one variable, else sparse."""
    if slp.num_vars <= 1:
        return expand_univariate(slp, budget)
    return expand_multivariate(slp, budget)


def expand_poly_mod(slp: Slp, modulus: int, budget: EvalBudget | None = None) -> Polynomial:
    """Univariate expansion with coefficients reduced into ``[0, modulus)``."""
    if slp.num_vars > 1:
        raise ValueError("univariate expansion of a multivariate program")
    budget = budget or DEFAULT_BUDGET
    vals: list[list[int]] = [[1 % modulus]] * (slp.size + 1)

    def trim(c):
        while c and c[-1] == 0:
            c.pop()
        return c

    for p, (op, i, j) in enumerate(slp.instrs, start=1):
        a, b = vals[i], vals[j]
        if op == "var":
            v = [0, 1 % modulus]
        elif op in ("add", "sub"):
            sign = 1 if op == "add" else -1
            v = [0] * max(len(a), len(b))
            for k, c in enumerate(a):
                v[k] = c
            for k, c in enumerate(b):
                v[k] = (v[k] + sign * c) % modulus
        else:
            if a and b and len(a) + len(b) - 2 > budget.max_degree:
                raise BudgetExceeded(p, f"degree exceeds {budget.max_degree}")
            v = [0] * (len(a) + len(b) - 1) if a and b else []
            for s, ca in enumerate(a):
                if ca:
                    for t, cb in enumerate(b):
                        v[s + t] += ca * cb
            v = [c % modulus for c in v]
        vals[p] = trim(v)
    return Polynomial(vals[slp.output])


def degree_upper_bound(slp: Slp) -> int:
    """Gate recursion: constants 0, variables 1, every binary gate adds its operands' bounds."""
    m = [0] * (slp.size + 1)
    for p, (op, i, j) in enumerate(slp.instrs, start=1):
        m[p] = 1 if op == "var" else m[i] + m[j]
    return m[slp.output]


def bit_of(slp: Slp, n: int, i: int, budget: EvalBudget | None = None) -> int:
    """Bit ``i`` of the sign-magnitude ``n``-bit representation of the program's value.

    Bits ``0..n-1`` are magnitude bits from the least significant end; bit
    ``n`` is the sign bit.
    """
    if slp.num_vars:
        raise ValueError("bit_of needs a variable-free program")
    if not 0 <= i <= n:
        raise ValueError(f"bit index {i} outside 0..{n}")
    value = eval_exact(slp, (), budget)
    if abs(value).bit_length() > n:
        raise PrecisionViolation(f"|N| does not fit in {n} bits")
    if i == n:
        return int(value < 0)
    return (abs(value) >> i) & 1
