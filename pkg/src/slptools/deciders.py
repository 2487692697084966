"""Desk-scale deciders for the SLP problems, and counted oracle handles around them.

Every decider takes a program (plus the problem's binary parameters) and
returns a :class:`Verdict`. Reduction drivers never call deciders directly;
they receive :class:`OracleHandle` objects, so tests can swap in mocks and
campaigns can count queries.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable

from slptools import numtheory
from slptools.evaluate import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    EvalBudget,
    bit_of,
    eval_exact,
    eval_mod,
    expand_univariate,
)
from slptools.polyreal import is_poly_square, is_positive_poly
from slptools.slp import Slp, serialize

PROBLEMS = (
    "PosSLP",
    "EquSLP",
    "BitSLP",
    "Div2SLP",
    "ThreeSoSSLP",
    "TwoSoSSLP",
    "SquSLP",
    "DegSLP",
    "OrdSLP",
    "PosPolySLP",
    "SquPolySLP",
)

# binary parameters each problem carries besides the program
AUX_PARAMS = {
    "BitSLP": ("n", "i"),
    "Div2SLP": ("l",),
    "DegSLP": ("d",),
    "OrdSLP": ("l",),
}

DIV2_CAP = 1 << 20
EQU_PRIMES = 20
EQU_PRIME_BITS = 62


@dataclass(frozen=True)
class Verdict:
    answer: bool
    provenance: str
    seed: int | None = None
    cost: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.provenance:
            raise ValueError("verdict without provenance")
        if self.provenance.startswith("randomized") and self.seed is None:
            raise ValueError("randomized verdicts must carry their seed")

    def __bool__(self):
        return self.answer


@dataclass(frozen=True)
class ProblemInstance:
    problem: str
    slp: Slp
    aux: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.problem not in PROBLEMS:
            raise ValueError(f"unknown problem {self.problem!r}")
        wanted = set(AUX_PARAMS.get(self.problem, ()))
        if set(self.aux) != wanted:
            raise ValueError(f"{self.problem} takes parameters {sorted(wanted)}, got {sorted(self.aux)}")
        if any(v < 0 for v in self.aux.values()):
            raise ValueError("parameters must be non-negative")


def _require_constant(slp: Slp) -> None:
    if slp.num_vars:
        raise ValueError("this problem takes a variable-free program")


def _require_univariate(slp: Slp) -> None:
    if slp.num_vars > 1:
        raise ValueError("this problem takes a univariate program")


def _cost(slp: Slp, value: int | None = None) -> dict:
    out = {"gates": slp.size}
    if value is not None:
        out["bits"] = abs(value).bit_length()
    return out


def decide_pos(slp: Slp, budget: EvalBudget | None = None) -> Verdict:
    _require_constant(slp)
    budget = budget or DEFAULT_BUDGET
    try:
        value = eval_exact(slp, (), budget)
    except BudgetExceeded:
        value = eval_exact(slp, (), EvalBudget(2 * budget.max_bits, budget.max_degree, budget.max_terms))
    return Verdict(value > 0, "exact", cost=_cost(slp, value))


def random_prime(rng: random.Random, bits: int = EQU_PRIME_BITS) -> int:
    while True:
        p = rng.getrandbits(bits) | (1 << (bits - 1)) | 1
        if numtheory.is_prime(p):
            return p


@lru_cache(maxsize=256)
def equ_primes(seed: int) -> tuple[int, ...]:
    """The fixed prime sequence a given seed draws; cached since campaigns reuse seeds."""
    rng = random.Random(seed)
    return tuple(random_prime(rng) for _ in range(EQU_PRIMES))


def decide_equ(slp: Slp, seed: int = 0, budget: EvalBudget | None = None) -> Verdict:
    """Zero test by evaluation modulo 20 random 62-bit primes, confirmed exactly when affordable.

    One-sided: a nonzero residue proves ``N != 0``.
    """
    _require_constant(slp)
    for k, p in enumerate(equ_primes(seed)):
        if eval_mod(slp, (), p):
            return Verdict(False, "randomized:modular", seed, {"gates": slp.size, "primes": k + 1})
    try:
        value = eval_exact(slp, (), budget)
    except BudgetExceeded:
        return Verdict(True, "randomized:modular", seed, {"gates": slp.size, "primes": EQU_PRIMES})
    return Verdict(value == 0, "exact", seed, _cost(slp, value))


def decide_bit(slp: Slp, n: int, i: int, budget: EvalBudget | None = None) -> Verdict:
    _require_constant(slp)
    return Verdict(bool(bit_of(slp, n, i, budget)), "exact", cost=_cost(slp))


def decide_div2(slp: Slp, l: int) -> Verdict:
    """``2**l`` divides ``|N|``, by evaluation modulo ``2**l``."""
    _require_constant(slp)
    if l < 0:
        raise ValueError("l must be non-negative")
    if l > DIV2_CAP:
        raise ValueError(f"l = {l} is beyond the desk cap of {DIV2_CAP}")
    if l == 0:
        return Verdict(True, "trivial", cost=_cost(slp))
    return Verdict(eval_mod(slp, (), 1 << l) == 0, "modular", cost={"gates": slp.size, "modulus_bits": l})


def decide_3sos(slp: Slp, budget: EvalBudget | None = None) -> Verdict:
    _require_constant(slp)
    value = eval_exact(slp, (), budget)
    return Verdict(numtheory.is_3sos(value), "characterization", cost=_cost(slp, value))


def decide_2sos(slp: Slp, budget: EvalBudget | None = None) -> Verdict:
    _require_constant(slp)
    value = eval_exact(slp, (), budget)
    return Verdict(numtheory.is_2sos(value), "characterization", cost=_cost(slp, value))


def decide_squ(slp: Slp, budget: EvalBudget | None = None) -> Verdict:
    _require_constant(slp)
    value = eval_exact(slp, (), budget)
    # exact square test on the evaluated value; no randomized shortcut
    return Verdict(numtheory.is_perfect_square(value), "exact", cost=_cost(slp, value))


def decide_deg(slp: Slp, d: int, budget: EvalBudget | None = None) -> Verdict:
    """``deg f <= d``; the zero polynomial has degree ``-inf``."""
    _require_univariate(slp)
    f = expand_univariate(slp, budget)
    return Verdict(f.degree <= d, "expansion", cost={"gates": slp.size, "degree": f.degree})


def decide_ord(slp: Slp, l: int, budget: EvalBudget | None = None) -> Verdict:
    """``ord f >= l``; the zero polynomial has order ``+inf``."""
    _require_univariate(slp)
    f = expand_univariate(slp, budget)
    return Verdict(f.order >= l, "expansion", cost={"gates": slp.size, "order": f.order})


def decide_pos_poly(slp: Slp, budget: EvalBudget | None = None) -> Verdict:
    _require_univariate(slp)
    f = expand_univariate(slp, budget)
    return Verdict(is_positive_poly(f), "sturm", cost={"gates": slp.size, "degree": f.degree})


def decide_squ_poly(slp: Slp, budget: EvalBudget | None = None) -> Verdict:
    """Exact square test on the expanded polynomial (oracle for the randomized route)."""
    _require_univariate(slp)
    f = expand_univariate(slp, budget)
    return Verdict(is_poly_square(f) is not None, "expansion", cost={"gates": slp.size})


def decide_squ_poly_rand(slp: Slp, sample_exponent: int | None = None, seed: int = 0,
                         budget: EvalBudget | None = None) -> Verdict:
    """One-sided test: ``f(t)`` is a perfect square for ``t`` uniform in ``[1, 2**E]``.

    ``E`` defaults to ``200 * size``. Squares are always accepted; a non-square
    polynomial is accepted only when the sample happens to hit a square value.
    """
    _require_univariate(slp)
    e = 200 * slp.size if sample_exponent is None else sample_exponent
    t = random.Random(seed).randint(1, 1 << e)
    point = (t,) if slp.num_vars else ()
    value = eval_exact(slp, point, budget)
    return Verdict(numtheory.is_perfect_square(value), "randomized:sample", seed,
                   {"gates": slp.size, "sample_bits": e, "bits": abs(value).bit_length()})


def decide(instance: ProblemInstance, seed: int = 0, budget: EvalBudget | None = None) -> Verdict:
    slp, aux = instance.slp, instance.aux
    problem = instance.problem
    if problem == "PosSLP":
        return decide_pos(slp, budget)
    if problem == "EquSLP":
        return decide_equ(slp, seed, budget)
    if problem == "BitSLP":
        return decide_bit(slp, aux["n"], aux["i"], budget)
    if problem == "Div2SLP":
        return decide_div2(slp, aux["l"])
    if problem == "ThreeSoSSLP":
        return decide_3sos(slp, budget)
    if problem == "TwoSoSSLP":
        return decide_2sos(slp, budget)
    if problem == "SquSLP":
        return decide_squ(slp, budget)
    if problem == "DegSLP":
        return decide_deg(slp, aux["d"], budget)
    if problem == "OrdSLP":
        return decide_ord(slp, aux["l"], budget)
    if problem == "PosPolySLP":
        return decide_pos_poly(slp, budget)
    return decide_squ_poly_rand(slp, None, seed, budget)


def digest(slp: Slp) -> str:
    return hashlib.sha256(serialize(slp).encode()).hexdigest()[:16]


@dataclass
class OracleHandle:
    """Counted oracle for one problem; ``fn(slp, **params) -> bool``."""

    problem: str
    fn: Callable[..., Any]
    calls: int = 0
    trace: list = field(default_factory=list)

    def __call__(self, slp: Slp, **params) -> bool:
        self.calls += 1
        answer = bool(self.fn(slp, **params))
        self.trace.append({"problem": self.problem, "query": digest(slp), "size": slp.size,
                           "params": dict(params), "answer": answer})
        return answer


def true_oracle(problem: str, budget: EvalBudget | None = None, seed: int = 0) -> OracleHandle:
    """Oracle handle wired to the desk-scale decider for ``problem``."""
    table: dict[str, Callable[..., Any]] = {
        "PosSLP": lambda s: decide_pos(s, budget).answer,
        "EquSLP": lambda s: decide_equ(s, seed, budget).answer,
        "BitSLP": lambda s, n, i: decide_bit(s, n, i, budget).answer,
        "Div2SLP": lambda s, l: decide_div2(s, l).answer,
        "ThreeSoSSLP": lambda s: decide_3sos(s, budget).answer,
        "TwoSoSSLP": lambda s: decide_2sos(s, budget).answer,
        "SquSLP": lambda s: decide_squ(s, budget).answer,
        "DegSLP": lambda s, d: decide_deg(s, d, budget).answer,
        "OrdSLP": lambda s, l: decide_ord(s, l, budget).answer,
        "PosPolySLP": lambda s: decide_pos_poly(s, budget).answer,
        "SquPolySLP": lambda s: decide_squ_poly_rand(s, None, seed, budget).answer,
    }
    if problem not in table:
        raise ValueError(f"unknown problem {problem!r}")
    return OracleHandle(problem, table[problem])
