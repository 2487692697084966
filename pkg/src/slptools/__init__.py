"""Straight-line programs over the integers and their sum-of-squares decision problems."""

from slptools.slp import (
    Instruction,
    Slp,
    SlpSyntaxError,
    SlpValidationError,
    int_to_slp,
    parse,
    pow2_slp,
    serialize,
    shift_slp,
    validate,
)
from slptools.evaluate import (
    BudgetExceeded,
    EvalBudget,
    PrecisionViolation,
    bit_of,
    degree_upper_bound,
    eval_exact,
    eval_mod,
    expand_poly,
)
from slptools.poly import MultiPolynomial, Polynomial

__all__ = [
    "BudgetExceeded",
    "EvalBudget",
    "Instruction",
    "MultiPolynomial",
    "Polynomial",
    "PrecisionViolation",
    "Slp",
    "SlpSyntaxError",
    "SlpValidationError",
    "bit_of",
    "degree_upper_bound",
    "eval_exact",
    "eval_mod",
    "expand_poly",
    "int_to_slp",
    "parse",
    "pow2_slp",
    "serialize",
    "shift_slp",
    "validate",
]

__version__ = "0.1.0"
